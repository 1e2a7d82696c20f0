import random

import pytest
from hypothesis import strategies as st

from mcsched.model import HC, LC, Task, TaskSet, make_task


def hc(T, C_L, C_H, D=None, id=0) -> Task:
    return make_task(T=T, chi=HC, C_L=C_L, C_H=C_H, D=D if D is not None else T, id=id)


def lc(T, C, D=None, id=0) -> Task:
    return make_task(T=T, chi=LC, C_L=C, C_H=C, D=D if D is not None else T, id=id)


def taskset(*tasks: Task, m: int = 1, deadline_model: str = "implicit") -> TaskSet:
    renumbered = tuple(
        make_task(T=t.T, chi=t.chi, C_L=t.C_L, C_H=t.C_H, D=t.D, id=i)
        for i, t in enumerate(tasks)
    )
    return TaskSet(tasks=renumbered, m=m, deadline_model=deadline_model)


@st.composite
def small_tasks(draw, max_period=20, implicit=False, id=0):
    T = draw(st.integers(2, max_period))
    chi = draw(st.sampled_from([LC, HC]))
    if implicit:
        D = T
    else:
        D = draw(st.integers(1, T))
    C_L = draw(st.integers(1, D))
    if chi == HC:
        C_H = draw(st.integers(C_L, D))
    else:
        C_H = C_L
    return make_task(T=T, chi=chi, C_L=C_L, C_H=C_H, D=D, id=id)


@st.composite
def small_bins(draw, max_tasks=4, max_period=20, implicit=False):
    n = draw(st.integers(1, max_tasks))
    return [draw(small_tasks(max_period=max_period, implicit=implicit, id=i)) for i in range(n)]


@pytest.fixture
def rng():
    return random.Random(12345)
