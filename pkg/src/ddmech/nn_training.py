"""Training of the invariant network on labeled strain data.

Two loss functions, both full-batch mean squared errors:

* ``energy``: residual of the scalar energy,
* ``stress``: squared Frobenius norm of the in-plane second Piola-Kirchhoff
  residual (off-diagonal counted twice), with the predicted stress assembled
  from the invariant derivatives through the chain-rule tensors
  ``T1 = 2 I``, ``T2 = 2 (I1 I - C)``, ``T3 = 2 I3 C^{-1}``.

Gradients are closed-form backpropagation; the optimizer is Adam with the
standard bias correction, followed by projection ``w2 <- max(w2, 0)`` after
every step to keep the invariant-space Hessian positive semidefinite.
Several independently seeded restarts are trained; the parameters with the
lowest validation loss win, ties resolved by restart order.  Within each
restart the best-so-far validation weights are restored at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .nn_model import NetworkParams, energy_derivatives_batch, forward_batch, init_params
from .tensors import SQRT2, invariants_batch


class MissingTargets(Exception):
    """The requested loss needs labels the sample set does not carry."""


class AllRestartsDiverged(Exception):
    """Every training restart produced a non-finite loss."""


@dataclass
class LabeledSamples:
    """Vectorized training set built from strain rows (tensor components)."""

    c: np.ndarray            # (n, 3) right Cauchy-Green components
    x: np.ndarray            # (n, 3) shifted invariants
    energy: np.ndarray | None = None    # (n,)
    stress: np.ndarray | None = None    # (n, 3) tensor components

    @classmethod
    def from_strain_stress(
        cls,
        e: np.ndarray,
        stress: np.ndarray | None = None,
        energy: np.ndarray | None = None,
    ) -> "LabeledSamples":
        e = np.asarray(e, dtype=float)
        c = 2.0 * e.copy()
        c[:, :2] += 1.0
        i1, i2, i3 = invariants_batch(c)
        x = np.stack([i1 - 3.0, i2 - 3.0, i3 - 1.0], axis=-1)
        return cls(
            c=c,
            x=x,
            energy=None if energy is None else np.asarray(energy, dtype=float),
            stress=None if stress is None else np.asarray(stress, dtype=float),
        )

    def __len__(self) -> int:
        return self.c.shape[0]

    def chain_tensors(self) -> np.ndarray:
        """Mandel components of T_k = 2 dI_k/dC per sample, shape (n, 3, 3)."""
        c = self.c
        i1 = c[:, 0] + c[:, 1] + 1.0
        t = np.empty((len(self), 3, 3))
        t[:, 0] = [2.0, 2.0, 0.0]
        t[:, 1, 0] = 2.0 * (i1 - c[:, 0])
        t[:, 1, 1] = 2.0 * (i1 - c[:, 1])
        t[:, 1, 2] = -2.0 * SQRT2 * c[:, 2]
        t[:, 2, 0] = 2.0 * c[:, 1]
        t[:, 2, 1] = 2.0 * c[:, 0]
        t[:, 2, 2] = -2.0 * SQRT2 * c[:, 2]
        return t

    def stress_mandel(self) -> np.ndarray:
        s = np.array(self.stress, dtype=float, copy=True)
        s[:, 2] *= SQRT2
        return s


@dataclass
class TrainingConfig:
    loss: str = "stress"              # "energy" or "stress"
    n_hidden: int = 10
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    max_epochs: int = 200_000
    patience: int = 5_000
    restarts: int = 10
    val_fraction: float = 0.25
    seed: int = 0


@dataclass
class RestartResult:
    best_val_loss: float
    best_epoch: int
    epochs_run: int
    diverged: bool


@dataclass
class TrainingReport:
    loss_kind: str
    n_train: int
    n_val: int
    restarts: list[RestartResult] = field(default_factory=list)
    selected: int = -1


def loss(params: NetworkParams, samples: LabeledSamples, kind: str) -> float:
    """Full-batch loss of the given kind on a labeled sample set."""
    if kind == "energy":
        if samples.energy is None:
            raise MissingTargets("energy loss requires energy labels")
        r = forward_batch(params, samples.x) - samples.energy
        return float(np.mean(r * r))
    if kind == "stress":
        if samples.stress is None:
            raise MissingTargets("stress loss requires stress labels")
        d1, _ = energy_derivatives_batch(params, samples.x, order=1)
        pred = np.einsum("nk,nkv->nv", d1, samples.chain_tensors())
        r = pred - samples.stress_mandel()
        return float(np.mean(np.sum(r * r, axis=1)))
    raise ValueError(f"unknown loss kind {kind!r}")


def _energy_loss_grads(p: NetworkParams, x, psi_target):
    n = x.shape[0]
    with np.errstate(over="ignore", invalid="ignore"):
        z = x @ p.w1
        e = np.exp(p.alpha * z)
        r = (e - 1.0) @ p.w2 - psi_target
        val = float(np.mean(r * r))
        rr = (2.0 / n) * r
        gw2 = rr @ (e - 1.0)
        galpha = p.w2 * (rr @ (z * e))
        gw1 = x.T @ (rr[:, None] * e) * (p.w2 * p.alpha)
    return val, gw1, galpha, gw2


def _stress_loss_grads(p: NetworkParams, x, t, s_target):
    n = x.shape[0]
    with np.errstate(over="ignore", invalid="ignore"):
        z = x @ p.w1
        e = np.exp(p.alpha * z)
        d1 = (e * (p.w2 * p.alpha)) @ p.w1.T
        pred = np.einsum("nk,nkv->nv", d1, t)
        r = pred - s_target
        val = float(np.mean(np.sum(r * r, axis=1)))
        q = (2.0 / n) * np.einsum("nv,nkv->nk", r, t)   # dL/d(psi_,k)
        r2 = q @ p.w1                                   # (n, n_h)
        gw2 = p.alpha * np.sum(e * r2, axis=0)
        galpha = p.w2 * np.sum(r2 * e * (1.0 + p.alpha * z), axis=0)
        gw1 = (p.w2 * p.alpha) * (q.T @ e) + (p.w2 * p.alpha**2) * (x.T @ (r2 * e))
    return val, gw1, galpha, gw2


class _Adam:
    """Standard Adam over the three parameter arrays."""

    def __init__(self, p: NetworkParams, cfg: TrainingConfig):
        self.cfg = cfg
        self.m = [np.zeros_like(a) for a in (p.w1, p.alpha, p.w2)]
        self.v = [np.zeros_like(a) for a in (p.w1, p.alpha, p.w2)]
        self.t = 0

    def step(self, p: NetworkParams, grads) -> None:
        cfg = self.cfg
        self.t += 1
        arrays = (p.w1, p.alpha, p.w2)
        for a, g, m, v in zip(arrays, grads, self.m, self.v):
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * g * g
            mhat = m / (1.0 - cfg.beta1**self.t)
            vhat = v / (1.0 - cfg.beta2**self.t)
            a -= cfg.learning_rate * mhat / (np.sqrt(vhat) + cfg.eps)


def _run_restart(
    rng: np.random.Generator,
    cfg: TrainingConfig,
    train: LabeledSamples,
    val: LabeledSamples,
) -> tuple[NetworkParams | None, RestartResult]:
    p = init_params(cfg.n_hidden, rng)
    np.maximum(p.w2, 0.0, out=p.w2)
    adam = _Adam(p, cfg)

    if cfg.loss == "energy":
        step_grads = lambda q: _energy_loss_grads(q, train.x, train.energy)
        val_args = (val.x, val.energy)
        val_loss = lambda q: float(
            np.mean((forward_batch(q, val_args[0]) - val_args[1]) ** 2)
        )
    else:
        t_train = train.chain_tensors()
        s_train = train.stress_mandel()
        t_val = val.chain_tensors()
        s_val = val.stress_mandel()
        step_grads = lambda q: _stress_loss_grads(q, train.x, t_train, s_train)

        def val_loss(q):
            d1, _ = energy_derivatives_batch(q, val.x, order=1)
            r = np.einsum("nk,nkv->nv", d1, t_val) - s_val
            return float(np.mean(np.sum(r * r, axis=1)))

    best = np.inf
    best_epoch = 0
    best_params: NetworkParams | None = None
    epoch = 0
    for epoch in range(1, cfg.max_epochs + 1):
        train_val, gw1, galpha, gw2 = step_grads(p)
        if not np.isfinite(train_val):
            return None, RestartResult(np.inf, best_epoch, epoch, True)
        adam.step(p, (gw1, galpha, gw2))
        np.maximum(p.w2, 0.0, out=p.w2)

        v = val_loss(p)
        if not np.isfinite(v):
            return None, RestartResult(np.inf, best_epoch, epoch, True)
        if v < best:
            best = v
            best_epoch = epoch
            best_params = p.copy()
        elif epoch - best_epoch >= cfg.patience:
            break

    if best_params is None:
        return None, RestartResult(np.inf, best_epoch, epoch, True)
    return best_params, RestartResult(best, best_epoch, epoch, False)


def split_samples(
    samples: LabeledSamples, val_fraction: float, rng: np.random.Generator
) -> tuple[LabeledSamples, LabeledSamples]:
    """Deterministic random train/validation split."""
    n = len(samples)
    perm = rng.permutation(n)
    n_val = max(1, int(round(val_fraction * n)))
    take = lambda idx: LabeledSamples(
        c=samples.c[idx],
        x=samples.x[idx],
        energy=None if samples.energy is None else samples.energy[idx],
        stress=None if samples.stress is None else samples.stress[idx],
    )
    return take(perm[n_val:]), take(perm[:n_val])


def train(samples: LabeledSamples, cfg: TrainingConfig) -> tuple[NetworkParams, TrainingReport]:
    """Train with restarts; returns the best-validation parameters and a report."""
    if cfg.loss == "energy" and samples.energy is None:
        raise MissingTargets("energy loss requires energy labels")
    if cfg.loss == "stress" and samples.stress is None:
        raise MissingTargets("stress loss requires stress labels")

    root = np.random.SeedSequence(cfg.seed)
    split_ss, *restart_ss = root.spawn(cfg.restarts + 1)
    train_set, val_set = split_samples(
        samples, cfg.val_fraction, np.random.default_rng(split_ss)
    )

    report = TrainingReport(cfg.loss, len(train_set), len(val_set))
    candidates: list[NetworkParams | None] = []
    for ss in restart_ss:
        params, result = _run_restart(np.random.default_rng(ss), cfg, train_set, val_set)
        candidates.append(params)
        report.restarts.append(result)

    losses = [r.best_val_loss for r in report.restarts]
    best_idx = int(np.argmin(losses))
    if not np.isfinite(losses[best_idx]):
        raise AllRestartsDiverged(f"all {cfg.restarts} restarts diverged")
    report.selected = best_idx
    return candidates[best_idx], report
