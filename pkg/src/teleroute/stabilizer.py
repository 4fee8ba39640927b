"""Stabilizer tableau simulator for Clifford circuits.

Binary-symplectic tableau with sign tracking: rows 0..q-1 hold the
destabilizers, rows q..2q-1 the stabilizer generators, plus one
scratch row for determined measurements.  Supports H, S, CNOT, X, Z,
and Z-basis measurement with seeded or forced outcome selection, which
is all that routing-circuit verification needs.

The X/Z bit matrices evolve independently of measurement outcomes;
only the sign column depends on them.  A tableau therefore carries a
``batch`` of sign columns sharing one bit matrix, which lets a caller
follow every measurement branch of a circuit in a single pass: forced
outcomes, record values, and ``stabilized_sign`` become per-branch
vectors when ``batch > 1``.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Tableau"]


class Tableau:
    """Stabilizer state of ``q`` qubits, initially |0...0>.

    ``batch`` independent sign columns share the bit matrix; the
    default single column gives plain scalar semantics.
    """

    def __init__(self, q: int, batch: int = 1):
        if q < 1:
            raise ValueError("tableau needs at least one qubit")
        if batch < 1:
            raise ValueError("tableau needs at least one sign column")
        self.q = q
        self.batch = batch
        rows = 2 * q + 1
        self.x = np.zeros((rows, q), dtype=np.uint8)
        self.z = np.zeros((rows, q), dtype=np.uint8)
        self.r = np.zeros((rows, batch), dtype=np.uint8)
        idx = np.arange(q)
        self.x[idx, idx] = 1          # destabilizer i = X_i
        self.z[q + idx, idx] = 1      # stabilizer i = Z_i

    def copy(self) -> "Tableau":
        other = object.__new__(Tableau)
        other.q = self.q
        other.batch = self.batch
        other.x = self.x.copy()
        other.z = self.z.copy()
        other.r = self.r.copy()
        return other

    def _check(self, a: int):
        if not 0 <= a < self.q:
            raise ValueError(f"qubit {a} out of range")

    def _out(self, vec: np.ndarray):
        return int(vec[0]) if self.batch == 1 else vec.copy()

    # -- gates ----------------------------------------------------------

    def h(self, a: int):
        self._check(a)
        self.r ^= (self.x[:, a] & self.z[:, a])[:, None]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def s(self, a: int):
        self._check(a)
        self.r ^= (self.x[:, a] & self.z[:, a])[:, None]
        self.z[:, a] ^= self.x[:, a]

    def cnot(self, a: int, b: int):
        self._check(a)
        self._check(b)
        if a == b:
            raise ValueError("cnot needs distinct qubits")
        self.r ^= (self.x[:, a] & self.z[:, b]
                   & (self.x[:, b] ^ self.z[:, a] ^ 1))[:, None]
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]

    def x_if(self, a: int, m):
        """Apply X to ``a`` where the 0/1 mask ``m`` is set (scalar or
        one value per sign column)."""
        self._check(a)
        self.r ^= self.z[:, a][:, None] & np.asarray(m, dtype=np.uint8)

    def z_if(self, a: int, m):
        """Apply Z to ``a`` where the 0/1 mask ``m`` is set."""
        self._check(a)
        self.r ^= self.x[:, a][:, None] & np.asarray(m, dtype=np.uint8)

    def x_gate(self, a: int):
        self.x_if(a, 1)

    def z_gate(self, a: int):
        self.z_if(a, 1)

    # -- row arithmetic ---------------------------------------------------

    def _phase_exponents(self, src: int, rows: np.ndarray) -> np.ndarray:
        """i-exponent of (row src) * (row r) per qubit, summed, for each
        row index in ``rows``."""
        x1 = self.x[src].astype(np.int16)
        z1 = self.z[src].astype(np.int16)
        x2 = self.x[rows].astype(np.int16)
        z2 = self.z[rows].astype(np.int16)
        g = (x1 * z1 * (z2 - x2)
             + x1 * (1 - z1) * (z2 * (2 * x2 - 1))
             + (1 - x1) * z1 * (x2 * (1 - 2 * z2)))
        return g.sum(axis=1)

    def _accumulate(self, rows: np.ndarray, src: int):
        """Left-multiply each row in ``rows`` by row ``src`` (rowsum).

        The sign update is linear: r_row ^= r_src ^ phase_bit, where the
        phase bit comes from the bit matrix alone, so it applies across
        the whole batch at once.  Stabilizer and scratch rows always
        combine to a real sign; a destabilizer row may anticommute with
        ``src`` (its phase bit is bookkeeping, not a physical sign), so
        odd phases are collapsed there instead of rejected.
        """
        rows = np.asarray(rows)
        g = np.mod(self._phase_exponents(src, rows), 4)
        if np.any((g & 1) & (rows >= self.q)):
            raise AssertionError("tableau rows produced an imaginary sign")
        self.r[rows] ^= self.r[src][None, :] ^ (g // 2).astype(np.uint8)[:, None]
        self.x[rows] ^= self.x[src]
        self.z[rows] ^= self.z[src]

    # -- measurement ------------------------------------------------------

    def is_random(self, a: int) -> bool:
        """True when a Z measurement of ``a`` has an undetermined
        outcome (some stabilizer anticommutes with Z_a)."""
        self._check(a)
        return bool(self.x[self.q:2 * self.q, a].any())

    def measure(self, a: int, outcome=None, rng=None):
        """Measure qubit ``a`` in the Z basis and return the outcome:
        an int, or one value per sign column when batched.

        Random outcomes take ``outcome`` when forced (scalar or
        per-column), else draw from ``rng``, else default to 0.  Forcing
        an outcome on a determined measurement is an error unless it
        agrees.
        """
        self._check(a)
        q = self.q
        stab = self.x[q:2 * q, a].nonzero()[0]
        if stab.size == 0:
            # determined: multiply the stabilizers flagged by
            # destabilizer X-entries into the scratch row
            scratch = 2 * q
            self.x[scratch] = 0
            self.z[scratch] = 0
            self.r[scratch] = 0
            for i in self.x[:q, a].nonzero()[0]:
                self._accumulate(np.array([scratch]), q + i)
            out = self.r[scratch]
            if outcome is not None and np.any(
                    np.asarray(outcome, dtype=np.uint8) != out):
                raise ValueError(
                    f"forced outcome contradicts the determined "
                    f"measurement of qubit {a}")
            return self._out(out)
        p = q + int(stab[0])
        if outcome is not None:
            out = np.broadcast_to(
                np.asarray(outcome, dtype=np.uint8), (self.batch,))
        elif rng is not None:
            out = np.array([rng.randrange(2) for _ in range(self.batch)],
                           dtype=np.uint8)
        else:
            out = np.zeros(self.batch, dtype=np.uint8)
        others = self.x[:2 * q, a].nonzero()[0]
        others = others[others != p]
        if others.size:
            self._accumulate(others, p)
        self.x[p - q] = self.x[p]
        self.z[p - q] = self.z[p]
        self.r[p - q] = self.r[p]
        self.x[p] = 0
        self.z[p] = 0
        self.z[p, a] = 1
        self.r[p] = out
        return self._out(out)

    def stabilized_sign(self, a: int, pauli: str = "Z"):
        """+1/-1 when the state is stabilized by +/- that Pauli on
        qubit ``a`` (per sign column when batched); None when the
        measurement would be random."""
        if pauli not in ("X", "Y", "Z"):
            raise ValueError(f"unknown Pauli {pauli!r}")
        t = self.copy()
        if pauli == "X":
            t.h(a)
        elif pauli == "Y":
            t.s(a)
            t.s(a)
            t.s(a)
            t.h(a)
        if t.is_random(a):
            return None
        out = t.measure(a)
        if self.batch == 1:
            return -1 if out else 1
        return 1 - 2 * out.astype(np.int8)

    # -- self-checks ------------------------------------------------------

    def check_invariants(self):
        """Raise AssertionError unless rows form a valid tableau: full
        rank, stabilizers mutually commuting, destabilizer i
        anticommuting with stabilizer i alone."""
        q = self.q
        x = self.x[:2 * q].astype(np.uint8)
        z = self.z[:2 * q].astype(np.uint8)
        sym = (x @ z.T ^ z @ x.T) & 1
        want = np.zeros((2 * q, 2 * q), dtype=np.uint8)
        idx = np.arange(q)
        want[idx, q + idx] = 1
        want[q + idx, idx] = 1
        if not np.array_equal(sym, want):
            raise AssertionError("tableau commutation structure broken")
        m = np.concatenate([x, z], axis=1).copy()
        rank = 0
        for col in range(2 * q):
            rows = m[rank:, col].nonzero()[0]
            if rows.size == 0:
                continue
            pivot = rank + rows[0]
            m[[rank, pivot]] = m[[pivot, rank]]
            mask = m[:, col].copy()
            mask[rank] = 0
            m[mask.nonzero()[0]] ^= m[rank]
            rank += 1
        if rank != 2 * q:
            raise AssertionError("tableau rows are linearly dependent")
