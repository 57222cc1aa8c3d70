"""Small-blocklength simulation of the random-binning secret key protocol.

A code is a random i.i.d. codebook s^n(m) plus two uniform, independent
binning tables over (m, x^n): one producing the key, one producing the
public reconciliation message.  Bob decodes with the joint ML-MAP rule
(maximize the product of per-letter p(x_i, y_i | s_i(m)) over bin-consistent
pairs).  Everything at these blocklengths is small enough to enumerate, so
error probability and key leakage are computed exactly; Monte-Carlo is kept
only as a cross-check for the error probability.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce
from typing import Optional

import numpy as np

from .capacity import golden_section_max
from .channels import DiscreteBroadcastChannel, InputDistribution, marginal_channel
from .exponents import ALPHA_MIN, RatePoint
from .probability import mutual_information

DEFAULT_TABLE_BUDGET = 2**24
DEFAULT_ENUM_BUDGET = 2**26
THREADS_ENV_VAR = "SKAGREE_THREADS"
_WILSON_Z = 1.959963984540054  # two-sided 95%


class BudgetError(ValueError):
    pass


def _size_from_rate(n: int, rate: float) -> int:
    """|set| = 2^ceil(n*rate), robust to float fuzz in n*rate."""
    return 2 ** max(0, math.ceil(n * rate - 1e-9))


def num_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SecretKeyCode:
    n: int
    codewords: np.ndarray     # (|M|, n) input symbols
    key_bins: np.ndarray      # (|M|, |X|^n) -> [0, |K|)
    public_bins: np.ndarray   # (|M|, |X|^n) -> [0, |Phi|)
    num_messages: int
    num_public: int
    num_keys: int
    rates: RatePoint
    seed: object

    def __post_init__(self):
        if self.codewords.shape[0] != self.num_messages:
            raise ValueError("codeword table size mismatch")
        for table, size in ((self.key_bins, self.num_keys),
                            (self.public_bins, self.num_public)):
            if table.shape != self.key_bins.shape:
                raise ValueError("binning tables must share shape")
            if table.min() < 0 or table.max() >= size:
                raise ValueError("bin index out of range")


@dataclass(frozen=True)
class SimReport:
    error_probability: float
    leakage_bits: Optional[float]   # None for Monte-Carlo runs (exact only)
    method: str                     # "exact" | "monte-carlo"
    trials: int                     # MC trials, or enumeration size for exact
    error_half_width: Optional[float] = None  # Wilson 95% half width (MC only)

    def to_json(self) -> dict:
        return {
            "error_probability": self.error_probability,
            "leakage_bits": self.leakage_bits,
            "method": self.method,
            "trials": self.trials,
            "error_half_width": self.error_half_width,
        }


def generate_code(channel: DiscreteBroadcastChannel, n: int, rates: RatePoint,
                  inp: InputDistribution, seed,
                  table_budget: int = DEFAULT_TABLE_BUDGET) -> SecretKeyCode:
    """Draw a codebook and both binning tables; deterministic given seed."""
    if n < 1:
        raise ValueError("blocklength must be >= 1")
    S, X = channel.alphabet_sizes[0], channel.alphabet_sizes[1]
    num_m = _size_from_rate(n, rates.r_m)
    num_phi = _size_from_rate(n, rates.r_phi)
    num_k = _size_from_rate(n, rates.r_sk)
    entries = num_m * X**n
    if entries > table_budget:
        raise BudgetError(
            "binning tables need |M|*|X|^n = %d entries, over the budget %d"
            % (entries, table_budget))
    rng = np.random.default_rng(seed)
    codewords = rng.choice(S, size=(num_m, n), p=inp.probs)
    key_bins = rng.integers(0, num_k, size=(num_m, X**n))
    public_bins = rng.integers(0, num_phi, size=(num_m, X**n))
    return SecretKeyCode(n=n, codewords=codewords, key_bins=key_bins,
                         public_bins=public_bins, num_messages=num_m,
                         num_public=num_phi, num_keys=num_k, rates=rates,
                         seed=seed)


def _xy_table(channel):
    return marginal_channel(channel, "xy")  # (S, X, Y)


def sequence_index(symbols, base: int) -> int:
    """Lexicographic index of a symbol sequence (first symbol most significant)."""
    idx = 0
    for s in symbols:
        idx = idx * base + int(s)
    return idx


def index_sequence(idx: int, base: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[i] = idx % base
        idx //= base
    return out


def _score_matrix(codeword, table):
    """(X^n, Y^n) array of prod_i p(x_i, y_i | s_i), lexicographic on both axes."""
    mats = [table[int(s)] for s in codeword]
    return reduce(np.kron, mats)


def mlmap_decode(code: SecretKeyCode, channel: DiscreteBroadcastChannel,
                 y_seq, phi: int):
    """Joint ML-MAP decoding of (m, x^n) within the public bin phi.

    Ties go to the smallest m, then the lexicographically smallest x^n.
    If the bin is empty the decoder falls back to (first message, all-zero
    sequence).
    """
    y_seq = np.asarray(y_seq, dtype=np.int64)
    if y_seq.shape != (code.n,):
        raise ValueError("y sequence length must equal the blocklength")
    if not 0 <= phi < code.num_public:
        raise ValueError("public message index out of range")
    W = _xy_table(channel)
    X = W.shape[1]
    scores = np.empty((code.num_messages, X**code.n))
    for m in range(code.num_messages):
        vecs = [W[int(s)][:, int(y)] for s, y in zip(code.codewords[m], y_seq)]
        scores[m] = reduce(np.kron, vecs)
    mask = code.public_bins == phi
    if not mask.any():
        return 0, np.zeros(code.n, dtype=np.int64)
    masked = np.where(mask, scores, -1.0)
    flat = int(np.argmax(masked))  # first maximum: smallest m, then lex x^n
    m_hat, x_idx = divmod(flat, X**code.n)
    return m_hat, index_sequence(x_idx, X, code.n)


def _full_score_tensors(code, channel, output: str):
    """score[m, x_idx, o_idx] = prod_i p(x_i, o_i | s_i(m)) for o in {y,z}."""
    table = marginal_channel(channel, "x" + output)
    return np.stack([_score_matrix(code.codewords[m], table)
                     for m in range(code.num_messages)])


def exact_evaluate(code: SecretKeyCode, channel: DiscreteBroadcastChannel,
                   enum_budget: int = DEFAULT_ENUM_BUDGET) -> SimReport:
    """Exact error probability and key leakage by full enumeration."""
    S, X, Y, Z = channel.alphabet_sizes
    m_x = code.num_messages * X**code.n
    if m_x * Y**code.n > enum_budget or m_x * Z**code.n > enum_budget:
        raise BudgetError(
            "enumeration needs %d cells, over the budget %d"
            % (max(m_x * Y**code.n, m_x * Z**code.n), enum_budget))

    score_y = _full_score_tensors(code, channel, "y")  # (M, X^n, Y^n)
    flat = score_y.reshape(m_x, Y**code.n)
    pub_flat = code.public_bins.reshape(m_x)
    key_flat = code.key_bins.reshape(m_x)

    # Decode table: K_B for every (y^n, phi).
    k_b = np.zeros((Y**code.n, code.num_public), dtype=np.int64)
    for phi in range(code.num_public):
        in_bin = pub_flat == phi
        if not in_bin.any():
            # empty bin: decoder falls back to (message 0, all-zero x^n)
            k_b[:, phi] = code.key_bins[0, 0]
            continue
        masked = np.where(in_bin[:, None], flat, -1.0)
        winners = np.argmax(masked, axis=0)  # first max = smallest m, lex x^n
        k_b[:, phi] = key_flat[winners]
    mismatch = key_flat[:, None] != k_b.T[pub_flat]  # (m_x, Y^n)
    error = float((flat * mismatch).sum() / code.num_messages)

    # Exact joint of (K_A, Phi, Z^n) for the leakage.
    score_z = _full_score_tensors(code, channel, "z").reshape(m_x, Z**code.n)
    joint_kpz = np.zeros((code.num_keys * code.num_public, Z**code.n))
    cell = key_flat * code.num_public + pub_flat
    np.add.at(joint_kpz, cell, score_z / code.num_messages)
    joint_k_vs_rest = joint_kpz.reshape(code.num_keys, code.num_public * Z**code.n)
    leakage = mutual_information(joint_k_vs_rest)

    return SimReport(error_probability=error, leakage_bits=leakage,
                     method="exact", trials=m_x * Y**code.n)


def monte_carlo_evaluate(code: SecretKeyCode, channel: DiscreteBroadcastChannel,
                         trials: int, seed) -> SimReport:
    """Estimate the error probability by sampling the protocol.

    Leakage is not estimated (mutual-information estimators are biased at
    these sample sizes); use exact_evaluate for leakage.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    W = _xy_table(channel)
    S, X, Y = W.shape
    cdf = W.reshape(S, X * Y).cumsum(axis=1)
    failures = 0
    for _ in range(trials):
        m = int(rng.integers(code.num_messages))
        u = rng.random(code.n)
        xs = np.zeros(code.n, dtype=np.int64)
        ys = np.zeros(code.n, dtype=np.int64)
        for i, s in enumerate(code.codewords[m]):
            cell = int(np.searchsorted(cdf[int(s)], u[i], side="right"))
            xs[i], ys[i] = divmod(cell, Y)
        x_idx = sequence_index(xs, X)
        phi = int(code.public_bins[m, x_idx])
        k_a = int(code.key_bins[m, x_idx])
        m_hat, x_hat = mlmap_decode(code, channel, ys, phi)
        k_b = int(code.key_bins[m_hat, sequence_index(x_hat, X)])
        if k_a != k_b:
            failures += 1
    p_hat = failures / trials
    z2 = _WILSON_Z**2
    center = (p_hat + z2 / (2 * trials)) / (1 + z2 / trials)
    half = (_WILSON_Z / (1 + z2 / trials)) * math.sqrt(
        p_hat * (1 - p_hat) / trials + z2 / (4 * trials**2))
    return SimReport(error_probability=p_hat, leakage_bits=None,
                     method="monte-carlo", trials=trials,
                     error_half_width=half + abs(center - p_hat))


def ensemble_error_bound(channel: DiscreteBroadcastChannel, inp: InputDistribution,
                         n: int, rho: float, rates: RatePoint) -> float:
    """Ensemble-average error bound |Phi|^-rho |M|^rho [sum_y Psi4(y,rho)]^n,
    with the actual integer code sizes.  The raw value is returned (it can
    exceed 1; clip only when reporting as a probability)."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0,1]")
    num_m = _size_from_rate(n, rates.r_m)
    num_phi = _size_from_rate(n, rates.r_phi)
    pxy = marginal_channel(channel, "xy")  # (S,X,Y)
    py = pxy.sum(axis=1)                   # (S,Y)
    e = 1.0 / (1.0 + rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        p_x_given_ys = np.where(py[:, None, :] > 0, pxy / py[:, None, :], 0.0)
    inner = (inp.probs[:, None] * np.power(py, e)
             * np.power(p_x_given_ys, e).sum(axis=1)).sum(axis=0)  # per y
    total = math.fsum(np.power(inner, 1.0 + rho).tolist())
    return float(num_phi**-rho * num_m**rho * total**n)


def ensemble_leakage_bound(channel: DiscreteBroadcastChannel, inp: InputDistribution,
                           n: int, alpha: float, rates: RatePoint) -> float:
    """Ensemble-average leakage bound in bits:
    c(alpha) |K|^a |Phi|^a |M|^-a [sum Upsilon(s,x,z,alpha)]^n with
    c(alpha) = log2(e)/alpha."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0,1]")
    num_m = _size_from_rate(n, rates.r_m)
    num_phi = _size_from_rate(n, rates.r_phi)
    num_k = _size_from_rate(n, rates.r_sk)
    pxz = marginal_channel(channel, "xz")  # (S,X,Z)
    joint = inp.probs[:, None, None] * pxz
    pz = joint.sum(axis=(0, 1))
    pz_given_s = pxz.sum(axis=1)  # (S,Z)
    with np.errstate(divide="ignore", invalid="ignore"):
        p_x_given_sz = np.where(pz_given_s[:, None, :] > 0,
                                pxz / pz_given_s[:, None, :], 0.0)
        lift = np.where(pz[None, None, :] > 0,
                        pz_given_s[:, None, :] / np.where(pz[None, None, :] > 0,
                                                          pz[None, None, :], 1.0),
                        0.0) * p_x_given_sz
    terms = joint * np.power(lift, alpha)
    total = math.fsum(terms[joint > 0].tolist())
    c = math.log2(math.e) / alpha
    return float(c * num_k**alpha * num_phi**alpha * num_m**-alpha * total**n)


def minimize_error_bound(channel, inp, n, rates, iters: int = 200):
    """(rho*, min over rho of the ensemble error bound); the log-bound is
    convex in rho."""
    rho, neg = golden_section_max(
        lambda r: -math.log2(ensemble_error_bound(channel, inp, n, r, rates)),
        0.0, 1.0, iters)
    return rho, 2.0**-neg


def minimize_leakage_bound(channel, inp, n, rates, iters: int = 200):
    alpha, neg = golden_section_max(
        lambda a: -math.log2(ensemble_leakage_bound(channel, inp, n, a, rates)),
        ALPHA_MIN, 1.0, iters)
    return alpha, 2.0**-neg


def ensemble_average(channel: DiscreteBroadcastChannel, inp: InputDistribution,
                     n: int, rates: RatePoint, num_codebooks: int, seed,
                     table_budget: int = DEFAULT_TABLE_BUDGET,
                     enum_budget: int = DEFAULT_ENUM_BUDGET):
    """Average exact error/leakage over independently drawn codebooks and
    compare against the minimized ensemble bounds.

    Returns (avg_error, avg_leakage, check) where check carries the bounds,
    the 3*sigma/sqrt(N) slack terms, per-codebook rows, and pass verdicts.
    Each codebook's RNG stream comes from spawning the master seed, so the
    result does not depend on scheduling.
    """
    seq = seed if isinstance(seed, np.random.SeedSequence) \
        else np.random.SeedSequence(seed)
    children = seq.spawn(num_codebooks)

    def one(child):
        code = generate_code(channel, n, rates, inp, child, table_budget)
        rep = exact_evaluate(code, channel, enum_budget)
        return rep.error_probability, rep.leakage_bits

    workers = num_threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, children))
    else:
        rows = [one(c) for c in children]
    errors = np.array([r[0] for r in rows])
    leaks = np.array([r[1] for r in rows])
    avg_error = float(errors.mean())
    avg_leakage = float(leaks.mean())
    slack_e = 3.0 * float(errors.std(ddof=1)) / math.sqrt(num_codebooks) \
        if num_codebooks > 1 else 0.0
    slack_l = 3.0 * float(leaks.std(ddof=1)) / math.sqrt(num_codebooks) \
        if num_codebooks > 1 else 0.0
    rho_star, err_bound = minimize_error_bound(channel, inp, n, rates)
    alpha_star, leak_bound = minimize_leakage_bound(channel, inp, n, rates)
    check = {
        "error_bound": err_bound,
        "rho_star": rho_star,
        "error_slack": slack_e,
        "error_ok": avg_error <= err_bound + slack_e,
        "leakage_bound": leak_bound,
        "alpha_star": alpha_star,
        "leakage_slack": slack_l,
        "leakage_ok": avg_leakage <= leak_bound + slack_l,
        "per_codebook": rows,
    }
    return avg_error, avg_leakage, check


def empirical_exponent_fit(channel: DiscreteBroadcastChannel, inp: InputDistribution,
                           rates: RatePoint, n_range, num_codebooks: int, seed):
    """Least-squares slope of -log2(ensemble average) versus n.

    A finite-n diagnostic only — the slopes include rounding effects from the
    integer code sizes and are not asymptotic exponents.
    """
    n_list = list(n_range)
    seq = np.random.SeedSequence(seed)
    children = seq.spawn(len(n_list))
    err_pts, leak_pts = [], []
    for n, child in zip(n_list, children):
        avg_e, avg_l, _ = ensemble_average(channel, inp, n, rates,
                                           num_codebooks, child)
        if avg_e > 0.0:
            err_pts.append((n, -math.log2(avg_e)))
        else:
            warnings.warn("average error hit 0 at n=%d; excluded from the fit" % n)
        if avg_l > 0.0:
            leak_pts.append((n, -math.log2(avg_l)))
        else:
            warnings.warn("average leakage hit 0 at n=%d; excluded from the fit" % n)
    if len(err_pts) < 2 or len(leak_pts) < 2:
        raise ValueError("need at least 2 usable blocklengths for the fit")
    slope_e = float(np.polyfit([p[0] for p in err_pts], [p[1] for p in err_pts], 1)[0])
    slope_l = float(np.polyfit([p[0] for p in leak_pts], [p[1] for p in leak_pts], 1)[0])
    return slope_e, slope_l
