"""
Named presets for the explain command: δ lists and kind selections.
"""
from fractions import Fraction
from typing import Dict, List, Tuple

# δ lists for probable reasons, largest first
DELTA_PRESETS: Dict[str, List[Fraction]] = {
    "default": [Fraction(1), Fraction(95, 100), Fraction(9, 10), Fraction(3, 4)],
    "coarse": [Fraction(1), Fraction(3, 4), Fraction(1, 2)],
    "fine": [Fraction(1), Fraction(99, 100), Fraction(95, 100), Fraction(9, 10), Fraction(85, 100),
             Fraction(8, 10), Fraction(3, 4)],
    "sweep": [Fraction(1), Fraction(95, 100), Fraction(9, 10), Fraction(3, 4), Fraction(1, 2)],
}

# Kind selections
KIND_PRESETS: Dict[str, Tuple[str, ...]] = {
    "reasons": ("direct", "sufficient", "minimal"),
    "experiments": ("direct", "sufficient", "minimal", "probable", "contrastive", "importance"),
    "contrastive-features": ("contrastive", "features"),
}


def get_delta_preset(name: str) -> List[Fraction]:
    if name not in DELTA_PRESETS:
        raise KeyError(f"unknown δ preset '{name}', expected one of {', '.join(DELTA_PRESETS)}")
    return list(DELTA_PRESETS[name])
