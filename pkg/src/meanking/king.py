"""The retrodiction protocol itself.

Alice and Bob share the maximally entangled state on ``C^d (x) C^d``; Bob
measures the second factor in one of ``d + 1`` bases, Alice measures the pair
in her basis ``{|I>}`` and, once told Bob's basis ``A``, announces
``s(I, A)``.  Composite vectors use the index ``alice * d + bob``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .designs import StriationTable, verify_mols, verify_strings
from .errors import DimMismatch, InvalidFamily, InvalidTable, UnsupportedDimension
from .linalg import DEFAULT_TOL, rank
from .mub import SUPPORTED_DIMS, MubFamily, build_mub, verify_mub
from .report import ProtocolReport

RNG_ALGORITHM = "numpy PCG64 seeded by SeedSequence(seed).spawn, one child per block"
SIM_BLOCK = 4096


@dataclass
class EntangledState:
    d: int
    vector: np.ndarray


@dataclass
class PostMeasurementSet:
    """``states[A, a]`` is ``conj(|A,a>) (x) |A,a>``."""

    d: int
    states: np.ndarray

    def flat(self) -> np.ndarray:
        return self.states.reshape(-1, self.d * self.d)

    def gram(self) -> np.ndarray:
        m = self.flat()
        return m.conj() @ m.T


@dataclass
class KingBasis:
    d: int
    vectors: np.ndarray
    estimate: StriationTable
    orthonormalized: bool = False

    def gram(self) -> np.ndarray:
        return self.vectors.conj() @ self.vectors.T


def build_entangled(d: int) -> EntangledState:
    if d < 2:
        raise ValueError("dimension must be at least 2")
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return EntangledState(d, v)


def phi_states(bases: np.ndarray) -> np.ndarray:
    """``out[A, a] = kron(conj(bases[A, a]), bases[A, a])`` for any stack of bases."""
    nb, d, _ = bases.shape
    return np.einsum("Aak,Aal->Aakl", bases.conj(), bases).reshape(nb, d, d * d)


def post_measurement(family: MubFamily, tol: float = DEFAULT_TOL) -> PostMeasurementSet:
    report = verify_mub(family, tol)
    if not report.passed:
        raise InvalidFamily(report)
    return PostMeasurementSet(family.d, phi_states(family.bases))


def alice_vectors(states: np.ndarray, table: StriationTable) -> np.ndarray:
    """``|I> = d^(-1/2) sum_A |Phi_{A, s(I,A)}> - |Phi>`` for every row of ``table``."""
    d = table.d
    A = np.arange(d + 1)
    picked = states[A[None, :], table.s]  # (I, A, d*d)
    return picked.sum(axis=1) / np.sqrt(d) - build_entangled(d).vector


def _check_dims(family, table):
    if family.d != table.d:
        raise DimMismatch(f"family has d={family.d}, table has d={table.d}")


def build_alice_basis(family: MubFamily, table: StriationTable, tol: float = DEFAULT_TOL) -> KingBasis:
    _check_dims(family, table)
    pms = post_measurement(family, tol)
    report = verify_mols(table)
    if not report.passed:
        raise InvalidTable(report)
    return KingBasis(family.d, alice_vectors(pms.states, table), table)


def gram_schmidt(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Orthonormalise rows in index order; rows that collapse are refilled from the reference basis."""
    n, dim = vectors.shape

    def project_out(v, basis):
        for _ in range(2):
            for u in basis:
                v = v - np.vdot(u, v) * u
        return v

    out: list[np.ndarray | None] = []
    for k in range(n):
        v = project_out(vectors[k].astype(complex), [u for u in out if u is not None])
        norm = np.linalg.norm(v)
        out.append(v / norm if norm > tol else None)
    spare = iter(np.eye(dim, dtype=complex))
    for k in range(n):
        while out[k] is None:
            v = project_out(next(spare), [u for u in out if u is not None])
            norm = np.linalg.norm(v)
            if norm > 1e-6:
                out[k] = v / norm
    return np.array(out)


def verify_solution(family: MubFamily, table: StriationTable, tol: float = DEFAULT_TOL) -> ProtocolReport:
    """Check that Alice guesses with certainty using the constructed basis.

    Sub-checks: the overlap relation ``<Phi_{A,a}|I> = delta(a, s(I,A)) / sqrt(d)``,
    orthonormality of ``{|I>}``, and the resolution of the identity tested
    against the (complete) set of post-measurement states.
    """
    _check_dims(family, table)
    d = table.d
    mub_report = verify_mub(family, tol)
    states = phi_states(family.bases)
    flat = states.reshape(-1, d * d)
    vecs = alice_vectors(states, table)

    # <Phi_{A,a}|I>, indexed (A, a, I)
    amp = (flat.conj() @ vecs.T).reshape(d + 1, d, d * d)
    target = (table.s.T[:, None, :] == np.arange(d)[None, :, None]) / np.sqrt(d)
    overlap_dev = float(np.abs(amp - target).max())

    g = vecs.conj() @ vecs.T
    gdev = np.abs(g - np.eye(d * d))
    gram_dev = float(gdev.max())

    amp_flat = amp.reshape(-1, d * d)
    lhs = amp_flat @ amp_flat.conj().T
    rhs = flat.conj() @ flat.T
    completeness_dev = float(np.abs(lhs - rhs).max())

    witness = None
    if not mub_report.passed:
        witness = {"check": "mub", **mub_report.witness}
    elif overlap_dev > tol:
        A, a, I = np.unravel_index(np.argmax(np.abs(amp - target)), amp.shape)
        witness = {"check": "overlap", "A": int(A), "a": int(a), "I": int(I), "value": complex(amp[A, a, I])}
    elif gram_dev > tol:
        I, I2 = (int(x) for x in np.argwhere(gdev > tol)[0])
        witness = {"check": "orthogonality", "I": I, "I2": I2, "inner": complex(g[I, I2]),
                   "string_overlap": int((table.s[I] == table.s[I2]).sum())}
    elif completeness_dev > tol:
        k, k2 = np.unravel_index(np.argmax(np.abs(lhs - rhs)), lhs.shape)
        witness = {"check": "completeness", "A": int(k // d), "a": int(k % d),
                   "A2": int(k2 // d), "a2": int(k2 % d), "deviation": float(abs(lhs[k, k2] - rhs[k, k2]))}
    return ProtocolReport(
        check="king",
        passed=witness is None,
        max_deviation=max(overlap_dev, gram_dev, completeness_dev, mub_report.max_deviation),
        witness=witness,
        details={
            "mub_pass": mub_report.passed,
            "overlap_deviation": overlap_dev,
            "gram_deviation": gram_dev,
            "completeness_deviation": completeness_dev,
            "strings_pass": verify_strings(table).passed,
        },
        metadata={"d": d, "tolerance": tol},
    )


def phi_rank(family: MubFamily, tol: float = 1e-8) -> int:
    return rank(phi_states(family.bases).reshape(-1, family.d**2), tol)


def reduced_phi(family: MubFamily, table: StriationTable, I: int) -> np.ndarray:
    """The post-measurement states with ``{Phi_{A, s(I,A)}}`` removed."""
    d = family.d
    states = phi_states(family.bases)
    keep = [(A, a) for A in range(d + 1) for a in range(d) if a != table.s[I, A]]
    return np.array([states[A, a] for A, a in keep])


# -- simulation --

def _sample_index(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = (u[:, None] >= cum).sum(axis=1)
    return np.minimum(idx, cum.shape[1] - 1)


def simulate_protocol(
    bases: np.ndarray,
    alice: np.ndarray,
    estimate: np.ndarray,
    trials: int,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    metadata: dict | None = None,
) -> ProtocolReport:
    """Monte-Carlo run of the protocol plus the exact success probability.

    ``bases`` has shape ``(nb, d, d)``, ``alice`` ``(d*d, d*d)`` and
    ``estimate`` ``(d*d, nb)``.  Alice's vectors are orthonormalised first if
    they are not already an orthonormal basis.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    nb, d, _ = bases.shape
    states = phi_states(bases)
    entangled = build_entangled(d).vector

    g = alice.conj() @ alice.T
    orthonormalized = bool(np.abs(g - np.eye(d * d)).max() > tol)
    if orthonormalized:
        alice = gram_schmidt(alice)

    # Born weights: Bob's outcome given A, then Alice's outcome given (A, a)
    bob = np.abs(states.conj() @ entangled) ** 2
    bob /= bob.sum(axis=1, keepdims=True)
    alice_p = np.abs(np.einsum("Aak,Ik->AaI", states.conj(), alice)) ** 2
    alice_p /= alice_p.sum(axis=2, keepdims=True)

    hit = estimate.T[:, None, :] == np.arange(d)[None, :, None]  # (A, a, I)
    per_outcome = (alice_p * hit).sum(axis=2)
    analytic = float(per_outcome.min())
    mean_success = float((per_outcome * bob).sum(axis=1).mean())

    bob_cum = np.cumsum(bob, axis=1)
    alice_cum = np.cumsum(alice_p, axis=2)
    successes = 0
    n_blocks = -(-trials // SIM_BLOCK)
    for k, child in enumerate(np.random.SeedSequence(seed).spawn(n_blocks)):
        rng = np.random.Generator(np.random.PCG64(child))
        n = min(SIM_BLOCK, trials - k * SIM_BLOCK)
        A = rng.integers(0, nb, size=n)
        a = _sample_index(bob_cum[A], rng.random(n))
        I = _sample_index(alice_cum[A, a], rng.random(n))
        successes += int(np.sum(estimate[I, A] == a))

    worst = np.unravel_index(np.argmin(per_outcome), per_outcome.shape)
    passed = successes == trials and analytic >= 1 - tol
    meta = {
        "d": d,
        "seed": seed,
        "trials": trials,
        "success_count": successes,
        "analytic_success": analytic,
        "rng": RNG_ALGORITHM,
        "tolerance": tol,
    }
    meta.update(metadata or {})
    return ProtocolReport(
        check="simulate",
        passed=passed,
        max_deviation=1 - analytic,
        witness=None if passed else {"A": int(worst[0]), "a": int(worst[1]),
                                     "success_probability": analytic,
                                     "success_count": successes},
        details={
            "success_rate": successes / trials,
            "mean_success": mean_success,
            "orthonormalized": orthonormalized,
        },
        metadata=meta,
    )


def simulate(
    family: MubFamily, table: StriationTable, trials: int = 10_000, seed: int = 0, tol: float = DEFAULT_TOL
) -> ProtocolReport:
    _check_dims(family, table)
    vecs = alice_vectors(phi_states(family.bases), table)
    return simulate_protocol(family.bases, vecs, table.s, trials, seed, tol)


# -- composite dimension d = d1 * d2 --

@dataclass
class CompositeProtocol:
    """Product bases on ``C^(d1 d2)`` with a product solution for Alice.

    Composite indices pair up as ``k = k1 * d2 + k2`` for vector components
    and outcomes, and ``I = I1 * d2**2 + I2`` for Alice's outcomes.
    """

    d1: int
    d2: int
    bases: np.ndarray
    alice: KingBasis
    pairs: list[tuple[int, int]]
    pairing: str
    sub_families: tuple[MubFamily, MubFamily] = field(repr=False, default=None)

    @property
    def d(self) -> int:
        return self.d1 * self.d2

    @property
    def estimate(self) -> StriationTable:
        return self.alice.estimate


def basis_pairs(d1: int, d2: int) -> tuple[list[tuple[int, int]], str]:
    """Pick ``d + 1`` of the ``(d1+1)(d2+1)`` product bases.

    ``A -> (A mod (d1+1), A mod (d2+1))`` when that is injective on ``0..d``;
    otherwise ``A -> (A mod (d1+1), A div (d1+1))``.
    """
    n = d1 * d2 + 1
    pairs = [(A % (d1 + 1), A % (d2 + 1)) for A in range(n)]
    if len(set(pairs)) == n:
        return pairs, "residues"
    pairs = [(A % (d1 + 1), A // (d1 + 1)) for A in range(n)]
    return pairs, "mixed-radix"


def _composite_vectors(v1: np.ndarray, v2: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Tensor ``(C^d1 x C^d1)`` and ``(C^d2 x C^d2)`` vectors into ``(C^d1 x C^d2) x (C^d1 x C^d2)``."""
    prod = np.einsum("ix,jy->ijxy", v1, v2)  # (I1, I2, d1*d1, d2*d2)
    n1, n2 = v1.shape[0], v2.shape[0]
    prod = prod.reshape(n1, n2, d1, d1, d2, d2).transpose(0, 1, 2, 4, 3, 5)
    return prod.reshape(n1 * n2, (d1 * d2) ** 2)


def composite_build(d1: int, d2: int, tol: float = DEFAULT_TOL) -> CompositeProtocol:
    for di in (d1, d2):
        if di not in SUPPORTED_DIMS:
            raise UnsupportedDimension(di)
    from .designs import build_striations

    f1, f2 = build_mub(d1, tol), build_mub(d2, tol)
    t1, t2 = build_striations(d1), build_striations(d2)
    k1, k2 = build_alice_basis(f1, t1, tol), build_alice_basis(f2, t2, tol)
    d = d1 * d2
    pairs, pairing = basis_pairs(d1, d2)

    bases = np.array([
        np.einsum("ax,by->abxy", f1.bases[A1], f2.bases[A2]).reshape(d, d)
        for A1, A2 in pairs
    ])
    alice = _composite_vectors(k1.vectors, k2.vectors, d1, d2)
    s1 = t1.s[:, [A1 for A1, _ in pairs]]  # (d1^2, d+1)
    s2 = t2.s[:, [A2 for _, A2 in pairs]]
    estimate = (s1[:, None, :] * d2 + s2[None, :, :]).reshape(d * d, d + 1)
    return CompositeProtocol(d1, d2, bases, KingBasis(d, alice, StriationTable(d, estimate)),
                             pairs, pairing, (f1, f2))


def composite_simulate(proto: CompositeProtocol, trials: int = 10_000, seed: int = 0,
                       tol: float = DEFAULT_TOL) -> ProtocolReport:
    return simulate_protocol(
        proto.bases, proto.alice.vectors, proto.estimate.s, trials, seed, tol,
        metadata={"dims": [proto.d1, proto.d2], "pairing": proto.pairing,
                  "basis_pairs": [list(p) for p in proto.pairs]},
    )


def unbiasedness_scan(bases: np.ndarray, tol: float = DEFAULT_TOL) -> ProtocolReport:
    """Look for a pair of distinct bases with a vanishing overlap.

    Passes (the bases are certified *not* mutually unbiased) when such a pair
    exists; the first one found is reported in ``details``.
    """
    nb, d, _ = bases.shape
    sq = np.abs(np.einsum("Aak,Bbk->AaBb", bases.conj(), bases)) ** 2
    zero_pairs = 0
    first = None
    for A in range(nb):
        for B in range(A + 1, nb):
            block = sq[A, :, B, :]
            hits = np.argwhere(block <= tol)
            if hits.size:
                zero_pairs += 1
                if first is None:
                    a, b = (int(x) for x in hits[0])
                    first = {"A": A, "a": a, "A2": B, "a2": b, "overlap_squared": float(block[a, b])}
    dev = np.abs(sq - 1 / d)
    for A in range(nb):
        dev[A, :, A, :] = 0
    return ProtocolReport(
        check="not_mub",
        passed=first is not None,
        max_deviation=float(dev.max()),
        witness=None if first is not None else {"reason": "no vanishing cross-basis overlap"},
        details={"zero_overlap": first, "basis_pairs_with_zero_overlap": zero_pairs},
        metadata={"d": d},
    )
