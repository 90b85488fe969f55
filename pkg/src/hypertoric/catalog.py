"""Named torus-data instances used across tests and demos.

All of these are smooth (simple + unimodular) for the given theta_hat.
"""

from .arrangement import build_torus_data


def t_star_p(m):
    """Cotangent bundle of P^m: d=m, n=m+1, kernel spanned by (1,...,1)."""
    a = [[1 if i == j else 0 for i in range(m)] + [-1] for j in range(m)]
    theta_hat = [1] + [0] * m
    return build_torus_data(a, theta_hat)


def a_tilde(m):
    """A_m surface-type data: a = (1 ... 1), n = m+1, d = 1.

    theta_hat = (m, m-1, ..., 0): every circuit {i,j}, i<j, splits as
    S+ = {i}, S- = {j}.
    """
    a = [[1] * (m + 1)]
    theta_hat = list(range(m, -1, -1))
    return build_torus_data(a, theta_hat)


def p1_times_p1():
    """T*P^1 x T*P^1: d=2, n=4, ring rank 4."""
    a = [[1, -1, 0, 0], [0, 0, 1, -1]]
    theta_hat = [1, 0, 1, 0]
    return build_torus_data(a, theta_hat)


def rank8_d2():
    """The d=2, n=5 running example with six circuits and ring rank 8."""
    a = [[0, 0, 1, 1, 1], [1, 1, 0, 0, -1]]
    theta_hat = [-2, -4, -5, -7, -4]
    return build_torus_data(a, theta_hat)


INSTANCES = {
    "t_star_p1": lambda: t_star_p(1),
    "t_star_p2": lambda: t_star_p(2),
    "t_star_p3": lambda: t_star_p(3),
    "a_tilde_1": lambda: a_tilde(1),
    "a_tilde_2": lambda: a_tilde(2),
    "a_tilde_3": lambda: a_tilde(3),
    "p1_times_p1": p1_times_p1,
    "rank8_d2": rank8_d2,
}
