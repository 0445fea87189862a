from __future__ import annotations

import numpy as np
import pytest

from gmbif.bifurcation import equilibrium_count_across_SN, saddle_node_report
from gmbif.errors import ParameterError
from gmbif.model import Params


def at_sn(c, beta, d):
    return Params(c=c, beta=beta, b=(d * beta) ** 2 / 4, d=d)


def test_closed_forms_example():
    rep = saddle_node_report(at_sn(0.3, 0.5, 0.4))
    # W.F_b = -c/(d beta) = -1.5, W.D2F(V,V) = -2c/(d beta) = -3
    assert rep.wf_b == pytest.approx(-1.5, rel=1e-12)
    assert rep.wd2f == pytest.approx(-3.0, rel=1e-12)
    assert rep.V == pytest.approx([1.0, 0.5])
    assert rep.W == pytest.approx([1.0, -1.5])
    assert rep.certified


def test_random_draws():
    rng = np.random.default_rng(11)
    for c, beta, d in np.exp(rng.uniform(np.log(0.05), np.log(5), size=(50, 3))):
        p = at_sn(c, beta, d)
        rep = saddle_node_report(p)
        assert rep.wf_b == pytest.approx(-c / (d * beta), rel=1e-12)
        assert rep.wd2f == pytest.approx(-2 * c / (d * beta), rel=1e-12)
        assert equilibrium_count_across_SN(p, 1e-3 * p.b) == (2, 1, 0)


def test_requires_sn_point():
    with pytest.raises(ParameterError):
        saddle_node_report(Params(c=0.3, beta=0.5, b=0.0075, d=0.4))


def test_count_rejects_bad_offsets():
    p = at_sn(0.3, 0.5, 0.4)
    with pytest.raises(ParameterError):
        equilibrium_count_across_SN(p, 0.0)
    with pytest.raises(ParameterError):
        equilibrium_count_across_SN(p, p.b)
