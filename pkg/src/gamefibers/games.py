"""Normal-form games: payoff tensors and the multilinear expected-payoff map.

An n-player game lives in a dense tensor of shape (m_1, ..., m_n, n): the
leading axes enumerate each player's pure strategies, the trailing axis
holds every player's payoff at that pure profile.  Mixed strategies are
probability vectors on per-player simplices, and expected payoff is the
multilinear extension of the tensor: the payoff at a profile is the sum
over all pure profiles of the product of the selected probabilities times
the stored payoff vector.

All objects here are immutable after construction (arrays are marked
read-only), so games and profiles can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TAU_SIMPLEX = 1e-9    # how far input vectors may sit off their simplex
TAU_EVAL = 1e-10      # default tolerance for payoff identities (zero-sum etc.)
MAX_PROFILES = 10 ** 6


class GameSpec:
    """Immutable normal-form game.

    Parameters
    ----------
    payoffs : array_like, shape (m_1, ..., m_n, n)
        Payoff vector at every pure-strategy profile.
    player_names, strategy_labels : optional
        Display names; the document writer synthesizes defaults when absent.
    missing : iterable of profiles, optional
        Profiles that were never assigned a payoff entry, tracked so that
        ``validate_game`` can name them (see :meth:`from_entries`).
    meta : dict, optional
        Free-form annotations carried through serialization.
    """

    def __init__(self, payoffs, player_names=None, strategy_labels=None,
                 missing=(), meta=None):
        arr = np.array(payoffs, dtype=float)
        if arr.ndim < 2:
            raise ValueError("payoff tensor needs player axes plus a trailing payoff axis")
        n_profiles = math.prod(arr.shape[:-1])
        if n_profiles > MAX_PROFILES:
            raise ValueError(
                f"game too large: {n_profiles} pure profiles (limit {MAX_PROFILES})")
        arr.setflags(write=False)
        self.payoffs = arr
        self.player_names = (tuple(str(x) for x in player_names)
                             if player_names is not None else None)
        self.strategy_labels = (
            tuple(tuple(str(x) for x in row) for row in strategy_labels)
            if strategy_labels is not None else None)
        self.missing = frozenset(tuple(int(j) for j in p) for p in missing)
        self.meta = dict(meta) if meta else None

    @classmethod
    def from_entries(cls, m, entries, player_names=None, strategy_labels=None,
                     meta=None):
        """Build a game from (profile, values) pairs.

        Duplicate profiles and malformed entries are rejected outright;
        profiles never supplied are recorded in ``missing`` so that
        ``validate_game`` can report the tensor as incomplete.
        """
        shape = tuple(int(x) for x in m)
        n = len(shape)
        arr = np.full(shape + (n,), np.nan)
        seen = set()
        for profile, values in entries:
            idx = tuple(int(j) for j in profile)
            if len(idx) != n:
                raise ValueError(f"profile {idx} does not have {n} entries")
            for player, j in enumerate(idx):
                if not 0 <= j < shape[player]:
                    raise ValueError(
                        f"profile {idx}: strategy index {j} out of range for player {player}")
            if idx in seen:
                raise ValueError(f"duplicate profile {idx}")
            vals = np.asarray(values, dtype=float)
            if vals.shape != (n,):
                raise ValueError(f"profile {idx}: expected {n} payoff values")
            arr[idx] = vals
            seen.add(idx)
        missing = [idx for idx in np.ndindex(*shape) if idx not in seen]
        return cls(arr, player_names, strategy_labels, missing=missing, meta=meta)

    @property
    def n(self) -> int:
        """Number of players."""
        return self.payoffs.ndim - 1

    @property
    def m(self) -> tuple[int, ...]:
        """Pure-strategy count per player."""
        return self.payoffs.shape[:-1]

    @property
    def num_profiles(self) -> int:
        return math.prod(self.m)

    @property
    def num_coords(self) -> int:
        """Total pure-strategy count over all players (ambient dimension)."""
        return sum(self.m)

    @property
    def reduced_dim(self) -> int:
        """Dimension of the strategy space: one coordinate dropped per player."""
        return self.num_coords - self.n

    def label(self, player: int, strategy: int) -> str:
        if self.strategy_labels is not None:
            return self.strategy_labels[player][strategy]
        return f"s{strategy}"

    def __eq__(self, other):
        if not isinstance(other, GameSpec):
            return NotImplemented
        return (self.payoffs.shape == other.payoffs.shape
                and np.array_equal(self.payoffs, other.payoffs)
                and self.player_names == other.player_names
                and self.strategy_labels == other.strategy_labels
                and self.missing == other.missing
                and self.meta == other.meta)

    def __repr__(self):
        return f"GameSpec(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Defect:
    """A named invariant violation found by ``validate_game``."""

    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


def validate_game(g: GameSpec) -> list[Defect]:
    """All invariant violations of a game, empty when it is well formed."""
    defects = []
    if g.n < 2:
        defects.append(Defect("player count", f"need at least 2 players, got {g.n}"))
    for i, mi in enumerate(g.m):
        if mi < 1:
            defects.append(Defect("empty strategy set",
                                  f"player {i} has no pure strategies"))
    if g.payoffs.shape[-1] != g.n:
        defects.append(Defect(
            "payoff vector length",
            f"payoff axis has length {g.payoffs.shape[-1]}, expected {g.n}"))
    for idx in sorted(g.missing):
        defects.append(Defect("incomplete tensor", f"no payoff entry for profile {idx}"))
    finite = np.isfinite(g.payoffs)
    if not finite.all():
        for at in np.argwhere(~finite):
            profile = tuple(int(j) for j in at[:-1])
            if profile in g.missing:
                continue
            defects.append(Defect(
                "non-finite payoff",
                f"payoff to player {int(at[-1])} at profile {profile} "
                f"is {g.payoffs[tuple(at)]!r}"))
    if g.player_names is not None and len(g.player_names) != g.n:
        defects.append(Defect("label shape", "player_names length does not match player count"))
    if g.strategy_labels is not None:
        if (len(g.strategy_labels) != g.n
                or any(len(row) != mi for row, mi in zip(g.strategy_labels, g.m))):
            defects.append(Defect("label shape", "strategy_labels do not match strategy counts"))
    return defects


class StrategyProfile:
    """One probability vector per player (a point of the product simplex)."""

    def __init__(self, blocks, tol: float = TAU_SIMPLEX):
        out = []
        for i, block in enumerate(blocks):
            b = np.array(block, dtype=float)
            if b.ndim != 1 or b.size == 0:
                raise ValueError(f"block {i} must be a nonempty vector")
            if not np.all(np.isfinite(b)):
                raise ValueError(f"block {i} has non-finite entries")
            if b.min() < -tol or b.max() > 1.0 + tol:
                raise ValueError(f"block {i} is off-simplex: entries outside [0, 1]")
            if abs(b.sum() - 1.0) > tol:
                raise ValueError(f"block {i} is off-simplex: sums to {b.sum()!r}")
            b.setflags(write=False)
            out.append(b)
        if not out:
            raise ValueError("profile needs at least one block")
        self.blocks = tuple(out)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b.size for b in self.blocks)

    def concat(self) -> np.ndarray:
        return np.concatenate(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, StrategyProfile):
            return NotImplemented
        return (self.shape == other.shape
                and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks)))

    def __repr__(self):
        inner = "; ".join(",".join(format(float(x), ".4g") for x in b) for b in self.blocks)
        return f"StrategyProfile({inner})"


def uniform_profile(g: GameSpec) -> StrategyProfile:
    return StrategyProfile([np.full(mi, 1.0 / mi) for mi in g.m])


def pure_profile(g: GameSpec, profile) -> StrategyProfile:
    """The vertex profile where each player plays the given pure strategy."""
    idx = tuple(int(j) for j in profile)
    if len(idx) != g.n:
        raise ValueError(f"profile {idx} does not have {g.n} entries")
    blocks = []
    for player, (mi, j) in enumerate(zip(g.m, idx)):
        if not 0 <= j < mi:
            raise IndexError(f"strategy index {j} out of range for player {player}")
        b = np.zeros(mi)
        b[j] = 1.0
        blocks.append(b)
    return StrategyProfile(blocks)


def random_interior_profile(g: GameSpec, rng) -> StrategyProfile:
    """Independent uniform (flat Dirichlet) draw on each player's simplex.

    Implemented as normalized exponential draws, which is absolutely
    continuous: lower-dimensional exceptional sets are missed almost surely.
    """
    blocks = []
    for mi in g.m:
        e = rng.exponential(size=mi)
        blocks.append(e / e.sum())
    return StrategyProfile(blocks)


def _require_match(g: GameSpec, s: StrategyProfile):
    if s.shape != g.m:
        raise ValueError(f"profile shape {s.shape} does not match game strategy counts {g.m}")


def profile_probability(s: StrategyProfile, profile) -> float:
    """Probability that play realizes the given pure profile: the product of
    the coordinates each player assigns to their selected pure strategy."""
    idx = tuple(int(j) for j in profile)
    if len(idx) != len(s.blocks):
        raise ValueError(f"profile {idx} does not have {len(s.blocks)} entries")
    p = 1.0
    for player, (b, j) in enumerate(zip(s.blocks, idx)):
        if not 0 <= j < b.size:
            raise IndexError(f"strategy index {j} out of range for player {player}")
        p *= float(b[j])
    return p


def _fold(tensor: np.ndarray, blocks) -> np.ndarray:
    """Contract the leading axes of ``tensor`` with one vector per axis."""
    out = tensor
    for b in blocks:
        out = np.tensordot(b, out, axes=(0, 0))
    return out


def _deviation(payoffs: np.ndarray, blocks, player: int) -> np.ndarray:
    """Contract every player axis except ``player``; result is (m_p, n)."""
    out = payoffs
    for q in range(player):
        out = np.tensordot(blocks[q], out, axes=(0, 0))
    for q in range(player + 1, len(blocks)):
        out = np.tensordot(blocks[q], out, axes=(0, 1))
    return out


def expected_payoff(g: GameSpec, s: StrategyProfile, player: int) -> float:
    """Expected payoff to one player: the probability-weighted sum of that
    player's payoff over all pure profiles."""
    _require_match(g, s)
    if not 0 <= player < g.n:
        raise IndexError(f"player index {player} out of range")
    return float(_fold(g.payoffs[..., player], s.blocks))


def total_payoff(g: GameSpec, s: StrategyProfile) -> np.ndarray:
    """Expected payoff vector, one component per player."""
    _require_match(g, s)
    return _fold(g.payoffs, s.blocks)


def deviation_payoffs(g: GameSpec, s: StrategyProfile, player: int) -> np.ndarray:
    """Payoff vectors when ``player`` switches to each pure strategy.

    Row j is the full payoff vector of the profile (s; player; e_j).  By
    own-block linearity these rows determine the payoff for any unilateral
    replacement of this player's strategy.
    """
    _require_match(g, s)
    if not 0 <= player < g.n:
        raise IndexError(f"player index {player} out of range")
    return _deviation(g.payoffs, s.blocks, player)


def unilateral_replace(s: StrategyProfile, player: int, sigma) -> StrategyProfile:
    """The profile with one player's block replaced and all others kept."""
    if not 0 <= player < len(s.blocks):
        raise IndexError(f"player index {player} out of range")
    new = np.asarray(sigma, dtype=float)
    if new.shape != s.blocks[player].shape:
        raise ValueError(
            f"replacement block has length {new.size}, expected {s.blocks[player].size}")
    blocks = list(s.blocks)
    blocks[player] = new
    return StrategyProfile(blocks)


def is_zero_sum(g: GameSpec, tol: float = TAU_EVAL) -> bool:
    """True iff payoffs sum to zero at every pure profile.

    By multilinearity this is equivalent to the payoff components summing
    to zero at every mixed profile.
    """
    sums = g.payoffs.sum(axis=-1)
    return bool(np.all(np.abs(sums) <= tol))


def reduce_profile(s: StrategyProfile) -> np.ndarray:
    """Chart coordinates: drop the last coordinate of each player's block."""
    return np.concatenate([b[:-1] for b in s.blocks])


def _blocks_from_reduced(m, r) -> list[np.ndarray]:
    """Rebuild per-player blocks from chart coordinates, without validation.

    The implied last coordinate of each block is 1 minus the rest, so the
    result always sums to one per block but may leave [0, 1]; this is the
    polynomial extension of the strategy space used by derivative probes
    and the continuation corrector.
    """
    r = np.asarray(r, dtype=float)
    want = sum(m) - len(m)
    if r.shape != (want,):
        raise ValueError(f"reduced point has length {r.size}, expected {want}")
    blocks = []
    pos = 0
    for mi in m:
        head = r[pos:pos + mi - 1]
        blocks.append(np.concatenate([head, [1.0 - head.sum()]]))
        pos += mi - 1
    return blocks


def _payoff_reduced(g: GameSpec, r) -> np.ndarray:
    """Total payoff evaluated at chart coordinates (polynomial extension)."""
    return _fold(g.payoffs, _blocks_from_reduced(g.m, r))


def embed_profile(g: GameSpec, r, tol: float = TAU_SIMPLEX) -> StrategyProfile:
    """Inverse of ``reduce_profile``: rebuild a valid profile from chart
    coordinates.

    Coordinates (including each implied last one) must lie within ``tol``
    of [0, 1]; they are then clamped and the block renormalized, so the
    round trip with ``reduce_profile`` is the identity on valid profiles.
    """
    blocks = _blocks_from_reduced(g.m, r)
    out = []
    for i, b in enumerate(blocks):
        if b.min() < -tol or b.max() > 1.0 + tol:
            raise ValueError(
                f"off-simplex: block {i} of the embedded point leaves [0, 1] "
                f"beyond tolerance {tol}")
        c = np.clip(b, 0.0, 1.0)
        out.append(c / c.sum())
    return StrategyProfile(out)


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection onto the standard probability simplex.

    Sort-based exact algorithm; idempotent, and points already on the
    simplex are returned unchanged.
    """
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("projection needs a nonempty vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("projection needs finite entries")
    if arr.min() >= 0.0 and abs(arr.sum() - 1.0) <= 1e-12:
        return arr.copy()
    u = np.sort(arr)[::-1]
    excess = np.cumsum(u) - 1.0
    ks = np.arange(1, arr.size + 1)
    rho = np.nonzero(u - excess / ks > 0)[0][-1]
    theta = excess[rho] / (rho + 1.0)
    return np.maximum(arr - theta, 0.0)
