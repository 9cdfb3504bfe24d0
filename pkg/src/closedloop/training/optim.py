"""
First-order update rules. Each rule takes its state, the ascent direction and
a learning rate and returns the new state plus the increment to add to the
parameters; the state never aliases the caller's arrays.
"""

from dataclasses import dataclass

import numpy as np

from . import env


@dataclass(frozen=True, eq=False)
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    betas: tuple = env.ADAM_BETAS
    eps: float = env.ADAM_EPS


@dataclass(frozen=True)
class GDState:
    t: int = 0


def init_state(name, shape, betas=env.ADAM_BETAS, eps=env.ADAM_EPS):
    if name == env.OPTIMIZER_ADAM:
        return AdamState(
            m=np.zeros(shape), v=np.zeros(shape), betas=tuple(betas), eps=eps
        )
    return GDState()


def adam_step(state, grad, lr):
    """
    Bias-corrected Adam:

        m_t = b1 m_{t-1} + (1 - b1) g
        v_t = b2 v_{t-1} + (1 - b2) g^2
        update = lr * (m_t / (1 - b1^t)) / (sqrt(v_t / (1 - b2^t)) + eps)
    """
    b1, b2 = state.betas
    t = state.t + 1
    m = b1 * state.m + (1.0 - b1) * grad
    v = b2 * state.v + (1.0 - b2) * (grad * grad)
    m_hat = m / (1.0 - b1**t)
    v_hat = v / (1.0 - b2**t)
    update = lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return AdamState(m=m, v=v, t=t, betas=state.betas, eps=state.eps), update


def gd_step(state, grad, lr):
    return GDState(t=state.t + 1), lr * grad


OPTIMIZERS = {
    env.OPTIMIZER_ADAM: adam_step,
    env.OPTIMIZER_GD: gd_step,
}
