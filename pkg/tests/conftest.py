import os
import sys

import pytest

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, os.path.join(ROOT, 'src'))

from algebra import AlgebraSpec  # noqa: E402

KUPERSHMIDT_F = '-j*(1+eps*j)/(1+eps*(i+j))'
VIRASORO_THETA = '(1/2)*(i^3 - i + (eps - 1/eps)*i^2)*delta(i+j)'
CONFIG_DIR = os.path.join(ROOT, 'config')


def config_path(*parts):
    return os.path.join(CONFIG_DIR, *parts)


@pytest.fixture(scope='session')
def witt():
    return AlgebraSpec.from_texts('-j')


@pytest.fixture(scope='session')
def witt_dual():
    return AlgebraSpec.from_texts('-j', scalar='dual')


@pytest.fixture(scope='session')
def kupershmidt():
    return AlgebraSpec.from_texts(KUPERSHMIDT_F, eps='1/2')


@pytest.fixture(scope='session')
def kupershmidt_dual():
    return AlgebraSpec.from_texts(KUPERSHMIDT_F, eps='1/2', scalar='dual')


@pytest.fixture(scope='session')
def virasoro():
    return AlgebraSpec.from_texts(KUPERSHMIDT_F, f_theta=VIRASORO_THETA, eps='1/2')
