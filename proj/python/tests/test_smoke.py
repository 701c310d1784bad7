import json
import os
from pathlib import Path

import pytest

import fusionring as fr

DATA = Path(os.environ.get("FUSION_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_fibonacci_product_and_dims():
    fib = fr.load_ring("builtin:fibonacci")
    assert fib.basis == ["1", "phi"]
    assert fib.multiply("phi", "phi") == {"1": 1, "phi": 1}
    assert fib.fuse("unit", "phi") == "1*phi"
    assert fib.dims()["phi"] == pytest.approx((1 + 5**0.5) / 2, rel=1e-12)
    ok, report = fib.verify()
    assert ok and "unit_law (condition 2): pass" in report


def test_lazy_rings():
    a1 = fr.load_ring("builtin:a1")
    assert not a1.is_finite
    assert a1.fuse("1", "2") == "1*1 + 1*3"
    a2 = fr.load_ring("builtin:a2")
    assert a2.fuse("p+", "p-") == "1*e + 1*p+p-"
    assert len(a2.labels(4)) == 31
    assert a2.verify(3)[0]


def test_document_round_trip():
    text = (DATA / "fibonacci.ring").read_text()
    assert fr.load_ring(str(DATA / "fibonacci.ring")).document() == text
    assert fr.canonical_json(text) == text
    assert json.loads(text)["format"] == "fusionring/1"


def test_torsion_verdicts():
    fib = fr.load_ring("builtin:fibonacci")
    v = fr.is_torsion_free(fib)
    assert v["status"] == "torsion_free_certified"
    assert v["classes"] == 1
    z2 = fr.load_ring(str(DATA / "z2.ring"))
    w = fr.is_torsion_free(z2)
    assert w["status"] == "not_torsion_free"
    assert [m.size for m in w["witnesses"]] == [1]
    assert w["witnesses"][0].verify()[0]


def test_enumeration_matches_subgroups():
    z4 = fr.load_ring(str(DATA / "z4.ring"))
    res = fr.enumerate_modules(z4, max_size=6)
    assert res["complete"]
    assert [m.size for m in res["modules"]] == [1, 2, 4]
    assert res["modules"][1].matrix("1") == [[0, 1], [1, 0]]


def test_tensor_product_obstruction():
    fib = fr.load_ring("builtin:fibonacci")
    ff = fr.tensor_product(fib, fib)
    assert len(ff.basis) == 4
    assert fr.is_torsion_free(ff)["status"] == "not_torsion_free"


def test_free_product_document():
    fib = fr.load_ring("builtin:fibonacci")
    fp = fr.free_product([fib, fib])
    assert not fp.is_finite
    assert '"kind": "free_product"' in fp.document()


def test_chebyshev_and_dynkin():
    assert fr.chebyshev_coeffs(5) == [0, 3, 0, -4, 0, 1]
    assert fr.dynkin_classify([[0, 1], [1, 1]])["name"] == "tadpole T2"
    cycle = [[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]]
    assert fr.dynkin_classify(cycle)["norm"] == 2.0


def test_errors():
    with pytest.raises(ValueError):
        fr.load_ring("builtin:nosuchring")
    fib = fr.load_ring("builtin:fibonacci")
    with pytest.raises(ValueError):
        fib.fuse("psi", "phi")
    with pytest.raises(ValueError):
        fr.enumerate_modules(fr.load_ring("builtin:a1"))
