"""Secret-key capacities, rate decompositions, and the two closed-form
channel families.

The degraded capacity and the conditional-information upper bound are both
optimized over the input distribution p(s) with a dense simplex grid followed
by local golden-section refinement; the objective need not be concave in
p(s), so grid+refine is preferred over ascent from a single start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .channels import (
    BinaryOnOffParams,
    ChannelError,
    DiscreteBroadcastChannel,
    GaussianInterferenceParams,
    InputDistribution,
    is_degraded,
    joint_distribution,
)
from .probability import (
    Pmf,
    binary_entropy,
    bsc_convolve,
    conditional_mutual_information,
    mutual_information,
)

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

# Cardinality bounds for auxiliary systems, in terms of |S| and |X|.  These
# are guidance (and validation ceilings), not a search space.
def aux_cardinality_bounds(s_size: int, x_size: int):
    w_max = s_size + 7
    u_max = (s_size + 5) * (s_size + 7)
    v_max = x_size * (s_size + 5) * (s_size + 7) ** 2 + 3
    return w_max, u_max, v_max


@dataclass(frozen=True)
class OptimizerConfig:
    """Budget knobs for the simplex-grid + refinement input search."""

    grid_step: Optional[float] = None  # default 1e-3 for |S|<=2, 1e-2 for |S|=3
    refine_iters: int = 200
    refine_sweeps: int = 4

    def step_for(self, k: int) -> float:
        if self.grid_step is not None:
            return self.grid_step
        return 1e-3 if k <= 2 else 1e-2


def golden_section_max(f, a: float, b: float, iters: int = 200):
    """Maximize a scalar function on [a, b]; returns (argmax, value).

    Ties in interval updates keep the left subinterval, biasing the argmax
    toward smaller arguments for determinism.  The best point actually
    evaluated is returned (including the endpoints).
    """
    best_x, best_v = a, f(a)
    vb = f(b)
    if vb > best_v:
        best_x, best_v = b, vb
    c = b - (b - a) * _INVPHI
    d = a + (b - a) * _INVPHI
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * _INVPHI
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * _INVPHI
            fd = f(d)
        if not (b - a) > 0.0:
            break
    for x, v in ((c, fc), (d, fd)):
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v


def _simplex_grid(k: int, step: float):
    """Deterministic enumeration of the probability simplex with spacing step."""
    m = int(round(1.0 / step))
    if k == 1:
        yield np.array([1.0])
        return
    if k == 2:
        for i in range(m + 1):
            yield np.array([1.0 - i / m, i / m])
        return
    if k == 3:
        for i in range(m + 1):
            for j in range(m + 1 - i):
                yield np.array([i / m, j / m, 1.0 - (i + j) / m])
        return
    raise ChannelError("input optimization supports |S| <= 3, got %d" % k)


def maximize_over_inputs(objective, k: int, cost=None, gamma: float = math.inf,
                         config: OptimizerConfig = OptimizerConfig()):
    """Maximize objective(p) over the feasible part of the simplex.

    ``objective`` takes a length-k probability vector.  Feasibility means
    dot(p, cost) <= gamma.  Returns (p_star, value).  Deterministic: grid
    points are scanned in index order and ties keep the earlier point.
    """
    cost = np.zeros(k) if cost is None else np.asarray(cost, dtype=float)
    if float(cost.min()) > gamma:
        raise ChannelError("cost constraint infeasible: min cost %g > gamma %g"
                           % (float(cost.min()), gamma))
    step = config.step_for(k)

    def feasible(p):
        return float(np.dot(p, cost)) <= gamma + 1e-12

    best_p, best_v = None, -math.inf
    for p in _simplex_grid(k, step):
        if not feasible(p):
            continue
        v = objective(p)
        if v > best_v:
            best_p, best_v = p, v
    if best_p is None:
        raise ChannelError("no feasible grid point under the cost constraint")

    if k == 2:
        beta = best_p[1]
        lo, hi = max(0.0, beta - step), min(1.0, beta + step)

        def g(b):
            p = np.array([1.0 - b, b])
            return objective(p) if feasible(p) else -math.inf

        b_ref, v_ref = golden_section_max(g, lo, hi, config.refine_iters)
        if v_ref > best_v or (v_ref == best_v and b_ref < beta):
            best_p, best_v = np.array([1.0 - b_ref, b_ref]), v_ref
    elif k == 3:
        p = best_p.copy()
        v_cur = best_v
        for _ in range(config.refine_sweeps):
            for i, j in ((0, 1), (0, 2), (1, 2)):
                mass = p[i] + p[j]
                if mass <= 0.0:
                    continue

                def g(t, i=i, j=j, mass=mass, p=p):
                    q = p.copy()
                    q[i], q[j] = t, mass - t
                    return objective(q) if feasible(q) else -math.inf

                t_ref, v_ref = golden_section_max(
                    g, max(0.0, p[i] - step), min(mass, p[i] + step),
                    config.refine_iters)
                if v_ref > v_cur:
                    p = p.copy()
                    p[i], p[j] = t_ref, mass - t_ref
                    v_cur = v_ref
        if v_cur > best_v:
            best_p, best_v = p, v_cur
    return best_p, best_v


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    r_ch: float
    r_src: float
    input_pmf: Union[Pmf, dict]
    expected_cost: float

    def __post_init__(self):
        if abs(self.capacity - (self.r_ch + self.r_src)) > 1e-9:
            raise ValueError("capacity must equal r_ch + r_src")

    def to_json(self) -> dict:
        if isinstance(self.input_pmf, Pmf):
            inp = self.input_pmf.probs.tolist()
        else:
            inp = self.input_pmf
        return {
            "capacity_bits": self.capacity,
            "r_ch": self.r_ch,
            "r_src": self.r_src,
            "input_pmf": inp,
            "expected_cost": self.expected_cost,
        }


@dataclass(frozen=True)
class AuxiliarySystem:
    """Auxiliary (W,U,V) layer for the general rate objective.

    Distributions: p(w), p(u|w), p(s|u), p(v|w,u,x).  The joint is completed
    with the channel's own p(x|s) and p(y,z|x,s), so the required Markov
    structure holds by construction.
    """

    p_w: np.ndarray                 # (W,)
    p_u_given_w: np.ndarray         # (W, U)
    p_s_given_u: np.ndarray         # (U, S)
    p_v_given_wux: np.ndarray       # (W, U, X, V)

    def __post_init__(self):
        pw = np.asarray(self.p_w, dtype=float)
        puw = np.asarray(self.p_u_given_w, dtype=float)
        psu = np.asarray(self.p_s_given_u, dtype=float)
        pv = np.asarray(self.p_v_given_wux, dtype=float)
        for name, arr, axis in (("p_w", pw, None), ("p_u_given_w", puw, 1),
                                ("p_s_given_u", psu, 1), ("p_v_given_wux", pv, 3)):
            if np.any(arr < 0):
                raise ChannelError("%s has negative entries" % name)
            mass = arr.sum() if axis is None else arr.sum(axis=axis)
            if np.any(np.abs(mass - 1.0) > 1e-12):
                raise ChannelError("%s rows do not sum to 1" % name)
        if puw.shape[0] != pw.shape[0] or pv.shape[0] != pw.shape[0]:
            raise ChannelError("inconsistent |W| across auxiliary conditionals")
        if psu.shape[0] != puw.shape[1] or pv.shape[1] != puw.shape[1]:
            raise ChannelError("inconsistent |U| across auxiliary conditionals")
        for name, arr in (("p_w", pw), ("p_u_given_w", puw),
                          ("p_s_given_u", psu), ("p_v_given_wux", pv)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @staticmethod
    def canonical_choice(channel: DiscreteBroadcastChannel,
                         inp: Optional[InputDistribution] = None) -> "AuxiliarySystem":
        """W trivial, U = S, V = X — the choice attaining the degraded capacity."""
        S, X = channel.alphabet_sizes[0], channel.alphabet_sizes[1]
        p_s = np.ones(S) / S if inp is None else inp.probs
        return AuxiliarySystem(
            p_w=np.array([1.0]),
            p_u_given_w=p_s.reshape(1, S).copy(),
            p_s_given_u=np.eye(S),
            p_v_given_wux=np.broadcast_to(np.eye(X), (1, S, X, X)).copy(),
        )


def _grouped_joint(arr: np.ndarray, a_axes, b_axes, c_axes) -> np.ndarray:
    """Sum out all other axes and reshape to a 3-axis (A, B, C) joint."""
    keep = tuple(a_axes) + tuple(b_axes) + tuple(c_axes)
    drop = tuple(i for i in range(arr.ndim) if i not in keep)
    red = arr.sum(axis=drop) if drop else arr
    # axes of red correspond to `keep` sorted ascending
    order = sorted(keep)
    perm = [order.index(ax) for ax in keep]
    red = np.transpose(red, perm)
    na = int(np.prod([arr.shape[i] for i in a_axes]))
    nb = int(np.prod([arr.shape[i] for i in b_axes]))
    nc = int(np.prod([arr.shape[i] for i in c_axes])) if c_axes else 1
    return red.reshape(na, nb, nc)


def _grouped_cmi(arr: np.ndarray, a_axes, b_axes, c_axes) -> float:
    """I(A;B|C) for grouped axes of a joint array (C may be empty)."""
    j = _grouped_joint(arr, a_axes, b_axes, c_axes)
    if not c_axes:
        return mutual_information(j[:, :, 0])
    return conditional_mutual_information(j)


def rate_split(channel: DiscreteBroadcastChannel, inp: InputDistribution):
    """(R_ch, R_src) for the choice U=S, V=X: the wiretap portion
    I(S;Y)-I(S;Z) and the source portion I(X;Y|S)-I(X;Z|S)."""
    arr = joint_distribution(channel, inp).probs  # (s,x,y,z)
    r_ch = _grouped_cmi(arr, (0,), (2,), ()) - _grouped_cmi(arr, (0,), (3,), ())
    r_src = _grouped_cmi(arr, (1,), (2,), (0,)) - _grouped_cmi(arr, (1,), (3,), (0,))
    return r_ch, r_src


def _difference_objective(channel: DiscreteBroadcastChannel):
    tr = channel.transition

    def f(p):
        arr = p[:, None, None, None] * tr
        return _grouped_cmi(arr, (0, 1), (2,), ()) - _grouped_cmi(arr, (0, 1), (3,), ())

    return f


def _conditional_objective(channel: DiscreteBroadcastChannel):
    tr = channel.transition

    def f(p):
        arr = p[:, None, None, None] * tr
        return _grouped_cmi(arr, (0, 1), (2,), (3,))

    return f


def degraded_capacity(channel: DiscreteBroadcastChannel, gamma: float = math.inf,
                      config: OptimizerConfig = OptimizerConfig()) -> CapacityResult:
    """Maximize I(X,S;Y) - I(X,S;Z) over p(s) under the cost constraint.

    Only valid for (physically) degraded channels; otherwise use
    ``upper_bound``, which bounds the capacity from above for any channel.
    """
    if gamma <= 0:
        raise ChannelError("gamma must be positive")
    if not is_degraded(channel):
        raise ChannelError(
            "channel is not degraded; the difference form is not its capacity — "
            "use upper_bound instead")
    k = channel.alphabet_sizes[0]
    p_star, _ = maximize_over_inputs(_difference_objective(channel), k,
                                     channel.cost, gamma, config)
    inp = InputDistribution(Pmf(p_star))
    r_ch, r_src = rate_split(channel, inp)
    return CapacityResult(capacity=r_ch + r_src, r_ch=r_ch, r_src=r_src,
                          input_pmf=inp.pmf,
                          expected_cost=float(np.dot(p_star, channel.cost)))


def upper_bound(channel: DiscreteBroadcastChannel, gamma: float = math.inf,
                config: OptimizerConfig = OptimizerConfig()) -> float:
    """max over feasible p(s) of I(X,S;Y|Z)."""
    if gamma <= 0:
        raise ChannelError("gamma must be positive")
    _, value = maximize_over_inputs(_conditional_objective(channel),
                                    channel.alphabet_sizes[0],
                                    channel.cost, gamma, config)
    return value


def upper_bound_with_input(channel: DiscreteBroadcastChannel, gamma: float = math.inf,
                           config: OptimizerConfig = OptimizerConfig()):
    p_star, value = maximize_over_inputs(_conditional_objective(channel),
                                         channel.alphabet_sizes[0],
                                         channel.cost, gamma, config)
    return Pmf(p_star), value


def _aux_joint(channel: DiscreteBroadcastChannel, aux: AuxiliarySystem) -> np.ndarray:
    """Joint p(w,u,v,s,x,y,z) built from the auxiliary layer and the channel."""
    tr = channel.transition  # (s,x,y,z)
    S, X, Y, Z = tr.shape
    if aux.p_s_given_u.shape[1] != S:
        raise ChannelError("auxiliary p(s|u) does not match the channel input alphabet")
    if aux.p_v_given_wux.shape[2] != X:
        raise ChannelError("auxiliary p(v|w,u,x) does not match the channel X alphabet")
    w_max, u_max, v_max = aux_cardinality_bounds(S, X)
    if aux.p_w.shape[0] > w_max or aux.p_u_given_w.shape[1] > u_max \
            or aux.p_v_given_wux.shape[3] > v_max:
        raise ChannelError("auxiliary alphabet exceeds its cardinality bound")
    p_x_given_s = tr.sum(axis=(2, 3))  # (S,X)
    with np.errstate(divide="ignore", invalid="ignore"):
        p_yz_given_xs = np.where(p_x_given_s[:, :, None, None] > 0,
                                 tr / np.where(p_x_given_s[:, :, None, None] > 0,
                                               p_x_given_s[:, :, None, None], 1.0),
                                 0.0)
    joint = np.einsum("w,wu,us,sx,wuxv,sxyz->wuvsxyz",
                      aux.p_w, aux.p_u_given_w, aux.p_s_given_u,
                      p_x_given_s, aux.p_v_given_wux, p_yz_given_xs)
    return joint


def general_rate_objective(channel: DiscreteBroadcastChannel,
                           aux: AuxiliarySystem) -> float:
    """I(U,V;Y|W) - I(U,V;Z|W) for the given auxiliary system (an evaluator,
    not an optimizer)."""
    joint = _aux_joint(channel, aux)  # (w,u,v,s,x,y,z)
    return (_grouped_cmi(joint, (1, 2), (5,), (0,))
            - _grouped_cmi(joint, (1, 2), (6,), (0,)))


def public_rate_requirement(channel: DiscreteBroadcastChannel,
                            aux: AuxiliarySystem) -> float:
    """I(V;X|U,W) - I(V;Y|U,W): the public reconciliation rate the lower
    bound needs.  May be negative, in which case any nonnegative rate works."""
    joint = _aux_joint(channel, aux)
    return (_grouped_cmi(joint, (2,), (4,), (0, 1))
            - _grouped_cmi(joint, (2,), (5,), (0, 1)))


def _c0(snr: float) -> float:
    return 0.5 * math.log2(1.0 + snr)


def gaussian_capacity(params: GaussianInterferenceParams) -> CapacityResult:
    """Closed-form capacity of the additive Gaussian interference model."""
    p = params

    def c1(rho, nu_i, nu_j, sig_i, sig_j):
        num = rho**2 * nu_i**2 * nu_j**2
        den = (nu_i**2 + sig_i**2) * (nu_j**2 + sig_j**2) - num
        return _c0(num / den)

    r_ch = _c0(p.power / (p.nu2**2 + p.sigma2**2)) - _c0(p.power / (p.nu3**2 + p.sigma3**2))
    r_src = c1(p.rho12, p.nu1, p.nu2, p.sigma1, p.sigma2) \
        - c1(p.rho13, p.nu1, p.nu3, p.sigma1, p.sigma3)
    return CapacityResult(
        capacity=r_ch + r_src, r_ch=r_ch, r_src=r_src,
        input_pmf={"family": "gaussian", "mean": 0.0, "variance": p.power},
        expected_cost=p.power)


def binary_onoff_rate(params: BinaryOnOffParams, beta: float):
    """(R_SK, R_ch, R_src) for a Bern(beta) input, from the closed-form
    expressions for the on-off model.

    Note: the source portion uses the degraded surrogate's noise level
    delta3'; see the README caveat on where this closed form disagrees with
    the generic evaluation of the exact channel law.
    """
    if not 0.0 <= beta <= 1.0:
        raise ChannelError("beta must lie in [0,1]")
    q, qt, d, d3 = params.q, params.q_tilde, params.delta, params.delta3
    d3p = params.delta3_prime
    hb, conv = binary_entropy, bsc_convolve
    i_sy = hb(conv(beta * q, d)) - beta * hb(conv(q, d)) - (1.0 - beta) * hb(d)
    i_sz = hb(conv(beta * qt * q, d3)) - beta * hb(conv(qt * q, d3)) - (1.0 - beta) * hb(d3)
    r_ch = i_sy - i_sz
    r_src = beta * (hb(conv(q, d)) - hb(conv(d, d)) - hb(conv(qt * q, d3))
                    + (1.0 - conv(q, d)) * hb(d3p) + conv(q, d) * hb(conv(qt, d3p)))
    return r_ch + r_src, r_ch, r_src


def binary_onoff_optimize(params: BinaryOnOffParams,
                          config: OptimizerConfig = OptimizerConfig()):
    """Maximize the closed-form R_SK over beta; grid + golden-section refine.

    Ties are broken toward smaller beta.
    """
    step = config.step_for(2)
    m = int(round(1.0 / step))
    best_b, best_v = 0.0, -math.inf
    for i in range(m + 1):
        b = i / m
        v = binary_onoff_rate(params, b)[0]
        if v > best_v:
            best_b, best_v = b, v
    lo, hi = max(0.0, best_b - step), min(1.0, best_b + step)
    b_ref, v_ref = golden_section_max(lambda b: binary_onoff_rate(params, b)[0],
                                      lo, hi, config.refine_iters)
    if v_ref > best_v or (v_ref == best_v and b_ref < best_b):
        best_b, best_v = b_ref, v_ref
    return best_b, best_v
