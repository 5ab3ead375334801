from __future__ import annotations

import pytest

from catsharp.samples import corpus_comonoids
from catsharp.corpus import categories


@pytest.fixture(scope="session")
def corpus():
    return categories()


@pytest.fixture(scope="session")
def comonoids():
    return corpus_comonoids()


@pytest.fixture(scope="session")
def theta_path3():
    from catsharp.theory import path_monad, theta
    return theta(path_monad(3), check=False)


@pytest.fixture(scope="session")
def theta_path4():
    from catsharp.theory import path_monad, theta
    return theta(path_monad(4))
