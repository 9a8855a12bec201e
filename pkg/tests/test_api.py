from totientshift import __version__
from totientshift.api import kappa, stream_witnesses


def test_readme_example():
    assert kappa(2).kappa == 227950
    w, = stream_witnesses(2, 1, 1)
    assert w.n == 2244938221
    assert w.h == 227950


def test_version():
    assert isinstance(__version__, str)
