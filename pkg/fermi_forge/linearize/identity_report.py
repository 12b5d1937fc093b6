from dataclasses import dataclass, field

# Term groups of the third-order identity: the three g x g principal terms,
# the terms with higher jets of the metric (H), and the terms carrying the
# second linearizations or h1 (R).
THIRD_ORDER_GROUPS = {
    "principal": ("principal",),
    "H": ("pjk_mean", "pjk_curvature", "k2_grad", "h3"),
    "R": ("pjk_w", "pj_w", "h1_grad", "k1_w", "h2_w"),
}

# Sides below this fraction of the data scale count as vanishing.
ZERO_SIDE_RTOL = 1e-4


@dataclass(frozen=True)
class IdentityReport:
    """
    Both sides of an integral identity for the higher linearizations.

    The left-hand side is the mixed derivative of the dS_g pairing of the
    nonlinear DN map with f_m, computed by finite differences of the
    nonlinear solver. The right-hand side is the sum of the volume terms,
    computed from the linearizations, and the boundary terms B, which
    include the variation of the g_u-conormal of the DN map.

    Parameters
    ----------
    order
        2 or 3.
    indices
        The index tuple (j, k, m) or (j, k, l, m).
    lhs
        The finite-difference derivative of the DN pairing.
    terms
        The volume terms by name.
    boundary
        The boundary terms by name.
    groups
        Named groups of volume terms, e.g., H and R.
    scale
        Size of the data, the product of the norms of the boundary data
        in the index tuple. Sides far below it count as vanishing.
    """

    order: int
    indices: tuple[int, ...]
    lhs: float
    terms: dict[str, float]
    boundary: dict[str, float] = field(default_factory=dict)
    groups: dict[str, tuple[str, ...]] = field(default_factory=dict)
    scale: float = 0.0

    @property
    def B(self) -> float:
        return sum(self.boundary.values())

    @property
    def volume(self) -> float:
        return sum(self.terms.values())

    @property
    def rhs(self) -> float:
        return self.volume + self.B

    @property
    def residual(self) -> float:
        """
        |lhs - rhs| / max(|lhs|, |rhs|, ZERO_SIDE_RTOL * scale), or 0 when
        this denominator vanishes. The floor keeps tuples for which both
        sides vanish, e.g. by symmetry, from reading as O(1) residuals.
        """
        floor = ZERO_SIDE_RTOL * self.scale
        denominator = max(abs(self.lhs), abs(self.rhs), floor)

        if denominator == 0:
            return 0.0

        return abs(self.lhs - self.rhs) / denominator

    def group(self, name: str) -> float:
        return sum(self.terms[term] for term in self.groups[name])

    def to_rows(self) -> list[dict]:
        """
        One row per (index tuple, term name, value, residual), for the
        tabular output.
        """
        values = {"lhs": self.lhs, "rhs": self.rhs, "volume": self.volume}
        values.update(self.terms)
        values.update({name: self.group(name) for name in self.groups})
        values.update(self.boundary)
        values["B"] = self.B

        label = "-".join(str(idx) for idx in self.indices)
        return [
            {
                "indices": label,
                "term": name,
                "value": float(value),
                "residual": self.residual,
            }
            for name, value in values.items()
        ]
