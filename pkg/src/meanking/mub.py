"""Maximal families of mutually unbiased bases in prime-power dimension."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ShapeError, UnsupportedDimension
from .gf import field_of_order, prime_power
from .linalg import DEFAULT_TOL
from .report import ProtocolReport

SUPPORTED_DIMS = (2, 3, 4, 5, 7, 8, 9)

# Stabilizer-state bases for two and three qubits, scaled by sqrt(d).
# '+' = 1, '-' = -1, 'i' = i, 'j' = -i.  The reference basis is appended.
_EVEN_TABLES = {
    4: [
        ["++++", "++--", "+-+-", "+--+"],
        ["+ii-", "+ij+", "+ji+", "+jj-"],
        ["++ij", "++ji", "+-ii", "+-jj"],
        ["+i+j", "+i-i", "+j+i", "+j-j"],
    ],
    8: [
        ["++++++++", "++++----", "++--++--", "++----++", "+-+-+-+-", "+-+--+-+", "+--++--+", "+--+-++-"],
        ["+ii-i--j", "+ii-j++i", "+ij+i-+i", "+ij+j+-j", "+ji+i+-i", "+ji+j-+j", "+jj-i++j", "+jj-j--i"],
        ["+++-iiji", "+++-jjij", "++-+iiij", "++-+jjji", "+-++ijjj", "+-++jiii", "+---ijii", "+---jijj"],
        ["+ii++ij-", "+ii+-ji+", "+ij-+ii+", "+ij--jj-", "+ji-+jj+", "+ji--ii-", "+jj++ji-", "+jj+-ij+"],
        ["++iiij+-", "++iiji-+", "++jjij-+", "++jjji+-", "+-ijii++", "+-ijjj--", "+-jiii--", "+-jijj++"],
        ["+i+i+j-i", "+i+i-i+j", "+i-j+j+j", "+i-j-i-i", "+j+j+i-j", "+j+j-j+i", "+j-i+i+i", "+j-i-j-j"],
        ["++ij+-ii", "++ij-+jj", "++ji+-jj", "++ji-+ii", "+-ii++ij", "+-ii--ji", "+-jj++ji", "+-jj--ij"],
        ["+i+ji+i-", "+i+jj-j+", "+i-ii+j+", "+i-ij-i-", "+j+ii-i+", "+j+ij+j-", "+j-ji-j-", "+j-jj+i+"],
    ],
}
_PHASES = {"+": 1, "-": -1, "i": 1j, "j": -1j}


@dataclass
class MubFamily:
    """``d + 1`` bases of ``C^d``; ``bases[A, a]`` is the vector |A,a>.

    Basis ``A = d`` is the reference basis by convention.  ``report`` is set
    by :func:`load_mub` (and by :func:`build_mub`) to the verification result.
    """

    d: int
    bases: np.ndarray
    labels: list[str] = field(default_factory=list)
    report: ProtocolReport | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        b = np.array(self.bases, dtype=complex)
        if b.shape != (self.d + 1, self.d, self.d):
            raise ShapeError(f"expected bases of shape {(self.d + 1, self.d, self.d)}, got {b.shape}")
        b.setflags(write=False)
        self.bases = b
        if not self.labels:
            self.labels = [f"B{A}" for A in range(self.d)] + ["reference"]

    def __eq__(self, other):
        return (
            isinstance(other, MubFamily)
            and self.d == other.d
            and np.array_equal(self.bases, other.bases)
        )

    @property
    def num_bases(self) -> int:
        return self.d + 1


def _pauli_family():
    s = 1 / np.sqrt(2)
    return np.array(
        [
            [[s, s], [s, -s]],  # sigma_x
            [[s, 1j * s], [s, -1j * s]],  # sigma_y
            [[1, 0], [0, 1]],  # sigma_z
        ],
        dtype=complex,
    )


def _odd_family(d: int) -> np.ndarray:
    # component at field point x of |A,a>: omega_p^tr(A x^2 + a x) / sqrt(d)
    F = field_of_order(d)
    p = F.p
    mul, add, tr = F.mul_table, F.add_table, F.trace_table
    xs = np.arange(d)
    x2 = mul[xs, xs]
    bases = np.empty((d + 1, d, d), dtype=complex)
    for A in range(d):
        quad = mul[A, x2]
        for a in range(d):
            exps = tr[add[quad, mul[a, xs]]]
            bases[A, a] = np.exp(2j * np.pi * exps / p) / np.sqrt(d)
    bases[d] = np.eye(d)
    return bases


def _even_family(d: int) -> np.ndarray:
    rows = _EVEN_TABLES[d]
    bases = np.empty((d + 1, d, d), dtype=complex)
    for A, basis in enumerate(rows):
        for a, code in enumerate(basis):
            bases[A, a] = [_PHASES[c] for c in code]
    bases[:d] /= np.sqrt(d)
    bases[d] = np.eye(d)
    return bases


def build_mub(d: int, tol: float = DEFAULT_TOL) -> MubFamily:
    if d not in SUPPORTED_DIMS:
        reason = "not a prime power" if prime_power(d) is None else "no built-in construction"
        raise UnsupportedDimension(d, reason)
    if d == 2:
        bases = _pauli_family()
        labels = ["sigma_x", "sigma_y", "sigma_z"]
    elif d % 2:
        bases = _odd_family(d)
        labels = []
    else:
        bases = _even_family(d)
        labels = []
    family = MubFamily(d, bases, labels)
    family.report = verify_mub(family, tol)
    if not family.report.passed:
        raise AssertionError(f"built-in family for d={d} failed verification: {family.report.summary()}")
    return family


def overlaps(family: MubFamily) -> np.ndarray:
    """``O[A, a, B, b] = |<A,a|B,b>|^2``."""
    b = family.bases
    amp = np.einsum("Aak,Bbk->AaBb", b.conj(), b)
    return np.abs(amp) ** 2


def verify_mub(family: MubFamily, tol: float = DEFAULT_TOL) -> ProtocolReport:
    d = family.d
    b = family.bases
    amp = np.einsum("Aak,Bbk->AaBb", b.conj(), b)
    eye = np.eye(d)
    same = np.arange(d + 1)
    ortho_dev = np.abs(amp[same, :, same, :] - eye)  # shape (d+1, d, d)
    sq = np.abs(amp) ** 2
    unb = np.abs(sq - 1 / d)
    unb[same, :, same, :] = 0.0
    max_ortho = float(ortho_dev.max())
    max_unb = float(unb.max())
    passed = max_ortho <= tol and max_unb <= tol
    witness = None
    if not passed:
        if max_ortho > tol:
            A, a, a2 = np.unravel_index(np.argmax(ortho_dev), ortho_dev.shape)
            witness = {"kind": "orthonormality", "A": int(A), "a": int(a), "A2": int(A), "a2": int(a2),
                       "value": complex(amp[A, a, A, a2])}
        else:
            idx = np.argwhere(unb > tol)[0]
            A, a, A2, a2 = (int(x) for x in idx)
            witness = {"kind": "unbiasedness", "A": A, "a": a, "A2": A2, "a2": a2,
                       "overlap_squared": float(sq[A, a, A2, a2])}
    return ProtocolReport(
        check="mub",
        passed=passed,
        max_deviation=max(max_ortho, max_unb),
        witness=witness,
        details={"orthonormality_deviation": max_ortho, "unbiasedness_deviation": max_unb},
        metadata={"d": d, "tolerance": tol},
    )


# -- document format --

def mub_to_dict(family: MubFamily) -> dict:
    return {
        "dimension": family.d,
        "labels": list(family.labels),
        "bases": [
            [[[float(c.real), float(c.imag)] for c in vec] for vec in basis]
            for basis in family.bases
        ],
    }


def save_mub(family: MubFamily, sink) -> None:
    """Write ``family`` as JSON to a path or text stream."""
    text = json.dumps(mub_to_dict(family))
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w") as fh:
            fh.write(text)


def mub_from_dict(doc, tol: float = DEFAULT_TOL) -> MubFamily:
    if not isinstance(doc, dict) or "dimension" not in doc or "bases" not in doc:
        raise ParseError("MUB document needs 'dimension' and 'bases'")
    d = doc["dimension"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError(f"bad dimension {d!r}")
    bases = doc["bases"]
    if not isinstance(bases, list) or len(bases) != d + 1:
        raise ShapeError(f"expected {d + 1} bases")
    arr = np.empty((d + 1, d, d), dtype=complex)
    for A, basis in enumerate(bases):
        if not isinstance(basis, list) or len(basis) != d:
            raise ShapeError(f"basis {A} must have {d} vectors")
        for a, vec in enumerate(basis):
            if not isinstance(vec, list) or len(vec) != d:
                raise ShapeError(f"vector ({A},{a}) must have {d} components")
            for k, comp in enumerate(vec):
                if not isinstance(comp, list) or len(comp) != 2:
                    raise ShapeError(f"component ({A},{a},{k}) must be a [re, im] pair")
                try:
                    arr[A, a, k] = complex(float(comp[0]), float(comp[1]))
                except (TypeError, ValueError) as exc:
                    raise ParseError(f"component ({A},{a},{k}) is not numeric") from exc
    labels = doc.get("labels") or []
    family = MubFamily(d, arr, list(labels) if len(labels) == d + 1 else [])
    family.report = verify_mub(family, tol)
    return family


def load_mub(source, tol: float = DEFAULT_TOL) -> MubFamily:
    """Read a family from a path or text stream; the verification result is attached, not enforced."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed MUB document: {exc}") from exc
    return mub_from_dict(doc, tol)
