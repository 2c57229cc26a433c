import pytest

from fibrehom import (build_chain_complex, build_pi, klein_bottle, rp2, sphere,
                      torus, z2_point, z2_sphere)


CORPUS_BUILDERS = {
    "S1": lambda: sphere(1),
    "S2": lambda: sphere(2),
    "S3": lambda: sphere(3),
    "T2": torus,
    "RP2": rp2,
    "Klein": klein_bottle,
}

Z2_BUILDERS = {
    "point-free": lambda: z2_point("G/e"),
    "point-fixed": lambda: z2_point("G/G"),
    "antipodal-S1": lambda: z2_sphere(1),
    "antipodal-S2": lambda: z2_sphere(2),
    "reflection-S1": lambda: z2_sphere(1, "reflection"),
}


@pytest.fixture(scope="session")
def corpus():
    """name -> (complex, pi, chain complex) for the trivial-F corpus."""
    out = {}
    for name, make in CORPUS_BUILDERS.items():
        x = make()
        pi = build_pi(x)
        out[name] = (x, pi, build_chain_complex(x, pi))
    return out


@pytest.fixture(scope="session")
def z2_corpus():
    out = {}
    for name, make in Z2_BUILDERS.items():
        x = make()
        pi = build_pi(x)
        out[name] = (x, pi, build_chain_complex(x, pi))
    return out
