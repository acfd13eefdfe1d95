"""Exact segment calculus on the unramified character line.

Everything here is integer arithmetic: exponents of the determinant
character are stored doubled, so the midpoint constant kappa = (n-1)/2 is
exact for every n and no floats appear anywhere.  Segments are intervals
of consecutive exponents, multisegments are multisets of segments, and the
two structural rules are the linkedness criterion for irreducibility of a
product and the socle/quotient description of a linked product.

`classify_image` runs the degenerate principal-series computation for the
averaging operator between the two compact quotients: for middle values of
the parameter the source and target each have length two, and the image is
pinned down by matching the cosocle of the source (computed through the
duality that swaps socle and cosocle) with the socle of the target.
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "CuspidalPoint",
    "Segment",
    "Multisegment",
    "ModuleDescriptor",
    "segment",
    "linked",
    "juxtaposed",
    "precedes",
    "union_cap",
    "dual_segment",
    "dual_multisegment",
    "multiseg_equal",
    "product_irreducible",
    "socle_quotient",
    "grassmannian_segments",
    "classify_image",
]


def _fmt2(e2):
    """Doubled exponent rendered as an exact rational string."""
    if e2 % 2 == 0:
        return str(e2 // 2)
    return f"{e2}/2"


@dataclass(frozen=True, order=True)
class CuspidalPoint:
    """The character |det|^(exponent2/2); the exponent is stored doubled."""

    exponent2: int

    def dual(self):
        return CuspidalPoint(-self.exponent2)

    def __str__(self):
        return _fmt2(self.exponent2)


@dataclass(frozen=True, order=True)
class Segment:
    """Consecutive cuspidal points [start, start+1, ..., end]."""

    start2: int
    end2: int

    def __post_init__(self):
        if (self.end2 - self.start2) % 2 != 0:
            raise ValueError("segment endpoints lie on different cuspidal lines")
        if self.end2 < self.start2:
            raise ValueError("segment end precedes its start")

    @property
    def start(self):
        return CuspidalPoint(self.start2)

    @property
    def end(self):
        return CuspidalPoint(self.end2)

    @property
    def length(self):
        return (self.end2 - self.start2) // 2 + 1

    def points(self):
        return [CuspidalPoint(e) for e in range(self.start2, self.end2 + 1, 2)]

    def contains(self, other):
        _same_line(self, other)
        return self.start2 <= other.start2 and other.end2 <= self.end2

    def __str__(self):
        return f"[{_fmt2(self.start2)}..{_fmt2(self.end2)}]"

    def to_dict(self):
        return {"start2": self.start2, "end2": self.end2,
                "display": str(self)}


def segment(a2, b2):
    return Segment(int(a2), int(b2))


def _same_line(d1, d2):
    if (d1.start2 - d2.start2) % 2 != 0:
        raise ValueError("incomparable cuspidal lines")


def linked(d1, d2):
    """Union is again a segment and neither segment contains the other."""
    _same_line(d1, d2)
    if d1.contains(d2) or d2.contains(d1):
        return False
    lo = max(d1.start2, d2.start2)
    hi = min(d1.end2, d2.end2)
    # union is a segment iff the two intervals overlap or are adjacent
    return lo <= hi + 2


def juxtaposed(d1, d2):
    """Linked with empty intersection."""
    if not linked(d1, d2):
        return False
    return max(d1.start2, d2.start2) > min(d1.end2, d2.end2)


def precedes(d1, d2):
    """Linked, with the second segment starting strictly later."""
    if not linked(d1, d2):
        return False
    return d2.start2 > d1.start2


def union_cap(d1, d2):
    """(union, intersection) of a linked pair; intersection may be None."""
    if not linked(d1, d2):
        raise ValueError("segments are not linked")
    union = Segment(min(d1.start2, d2.start2), max(d1.end2, d2.end2))
    lo = max(d1.start2, d2.start2)
    hi = min(d1.end2, d2.end2)
    cap = Segment(lo, hi) if lo <= hi else None
    return union, cap


def dual_segment(d):
    return Segment(-d.end2, -d.start2)


class Multisegment:
    """Multiset of segments; equality ignores order."""

    def __init__(self, segments):
        self.segments = tuple(sorted(segments))

    def content(self):
        """Multiset of cuspidal points, as a sorted tuple."""
        pts = []
        for d in self.segments:
            pts.extend(p.exponent2 for p in d.points())
        return tuple(sorted(pts))

    def __iter__(self):
        return iter(self.segments)

    def __len__(self):
        return len(self.segments)

    def __eq__(self, other):
        return isinstance(other, Multisegment) and \
            self.segments == other.segments

    def __hash__(self):
        return hash(self.segments)

    def __str__(self):
        return "{" + ", ".join(str(d) for d in self.segments) + "}"

    def to_dict(self):
        return [d.to_dict() for d in self.segments]


def dual_multisegment(ms):
    return Multisegment([dual_segment(d) for d in ms])


def multiseg_equal(ms1, ms2):
    return Multisegment(list(ms1)) == Multisegment(list(ms2))


def product_irreducible(ms):
    """A product of segment modules is irreducible iff no pair is linked."""
    segs = list(ms)
    for a in range(len(segs)):
        for b in range(a + 1, len(segs)):
            if linked(segs[a], segs[b]):
                return False
    return True


class ModuleDescriptor:
    """Composition structure of a module: irreducible, or length two."""

    def __init__(self, kind, constituents=None, socle=None, quotient=None,
                 unramified=True):
        if kind not in ("Irreducible", "LengthTwo"):
            raise ValueError("unknown descriptor kind")
        self.kind = kind
        self.unramified = bool(unramified)
        if kind == "Irreducible":
            if constituents is None:
                raise ValueError("irreducible descriptor needs constituents")
            self.constituents = constituents
            self.socle = constituents
            self.quotient = constituents
        else:
            if socle is None or quotient is None:
                raise ValueError("length-two descriptor needs socle and quotient")
            if socle == quotient:
                raise ValueError("length-two socle equals its quotient")
            self.socle = socle
            self.quotient = quotient
            self.constituents = None

    def __str__(self):
        if self.kind == "Irreducible":
            return f"Irreducible {self.constituents}"
        return f"LengthTwo socle={self.socle} quotient={self.quotient}"

    def to_dict(self):
        out = {"kind": self.kind, "unramified": self.unramified}
        if self.kind == "Irreducible":
            out["constituents"] = self.constituents.to_dict()
        else:
            out["socle"] = self.socle.to_dict()
            out["quotient"] = self.quotient.to_dict()
        return out


def socle_quotient(d, dprime):
    """Structure of the product module when `dprime` precedes `d`.

    The product has a unique irreducible submodule, attached to the
    unordered pair itself; the quotient is attached to the union together
    with the intersection (dropped when empty).
    """
    if not precedes(dprime, d):
        raise ValueError("precedence hypothesis fails")
    union, cap = union_cap(d, dprime)
    quotient = [union] if cap is None else [union, cap]
    return ModuleDescriptor("LengthTwo",
                            socle=Multisegment([d, dprime]),
                            quotient=Multisegment(quotient))


def grassmannian_segments(n, i):
    """The four segments attached to the (i, n-i) compact quotient pair.

    With kappa = (n-1)/2: the target side is carried by
    [kappa-i .. kappa-1] and [-kappa .. kappa-i], the source side by
    [-kappa+i .. kappa] and [-kappa+1 .. -kappa+i]; lengths i, n-i, n-i, i.
    """
    if n < 2 or not 1 <= i <= n - 1:
        raise ValueError("need n >= 2 and 1 <= i <= n-1")
    kappa2 = n - 1
    d1 = Segment(kappa2 - 2 * i, kappa2 - 2)
    d1p = Segment(-kappa2, kappa2 - 2 * i)
    d2 = Segment(-kappa2 + 2 * i, kappa2)
    d2p = Segment(-kappa2 + 2, -kappa2 + 2 * i)
    return d1, d1p, d2, d2p


def classify_image(n, i):
    """Structure of the averaging operator's image, exactly.

    Returns (descriptor, image).  For i in {1, n-1} the relevant product is
    already irreducible and equals the image.  Otherwise both sides have
    length two: the source is the dual of the product on the second pair of
    segments, and since dualizing swaps socle and cosocle, its cosocle is
    the elementwise dual of that product's socle.  That multisegment must
    coincide with the socle of the target product; the image is this common
    irreducible constituent.
    """
    d1, d1p, d2, d2p = grassmannian_segments(n, i)
    if i == 1 or i == n - 1:
        ms = Multisegment([d1, d1p])
        return ModuleDescriptor("Irreducible", constituents=ms), ms
    source = socle_quotient(d2, d2p)
    source_cosocle = dual_multisegment(source.socle)
    target = socle_quotient(d1, d1p)
    if not multiseg_equal(source_cosocle, target.socle):
        raise AssertionError("source cosocle does not match target socle")
    return target, target.socle
