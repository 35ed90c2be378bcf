import json
import math

import httpx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from evigate.embed import EmbeddingProviderConfig, LocalHashEmbedder, RemoteEmbedder, l2_normalize, sim
from evigate.errors import ConfigError, DimensionMismatch, ProtocolError, RemoteUnavailable


def test_local_hash_is_deterministic():
    e = LocalHashEmbedder()
    a, b = e.embed("equal protection"), LocalHashEmbedder().embed("equal protection")
    assert a.tobytes() == b.tobytes()


def test_local_hash_norms():
    e = LocalHashEmbedder(64)
    assert abs(np.linalg.norm(e.embed("equal protection")) - 1.0) < 1e-6
    assert not e.embed("").any()
    assert not e.embed("  ...  ").any()
    # only stopwords: falls back to all tokens rather than a zero vector
    assert abs(np.linalg.norm(e.embed("what is it")) - 1.0) < 1e-6


def test_local_hash_ignores_case_and_punctuation():
    e = LocalHashEmbedder()
    assert e.embed("Equal protection!").tobytes() == e.embed("equal PROTECTION").tobytes()


def test_sim_examples():
    v = l2_normalize([3.0, 4.0, 0.0])
    assert sim(v, v) == pytest.approx(1.0)
    assert sim(v, -v) == 0.0
    assert sim(l2_normalize([1, 0]), l2_normalize([0, 1])) == 0.0
    assert sim(v, np.zeros(3)) == 0.0
    with pytest.raises(DimensionMismatch):
        sim(v, l2_normalize([1.0, 0.0]))


texts = st.lists(st.sampled_from(["law", "rights", "equal", "state", "court", "vote", "the"]), max_size=8).map(" ".join)


@given(texts, texts)
def test_sim_symmetric_and_bounded(a, b):
    e = LocalHashEmbedder(32)
    va, vb = e.embed(a), e.embed(b)
    assert sim(va, vb) == sim(vb, va)
    assert 0.0 <= sim(va, vb) <= 1.0


def _fake_server(dim=4, calls=None, scale=3.0):
    def handler(request: httpx.Request) -> httpx.Response:
        body = json.loads(request.content)
        if calls is not None:
            calls.append(body["texts"])
        vecs = [[scale * (len(t) % 5 + 1)] + [float(i) for i in range(1, dim)] for t in body["texts"]]
        return httpx.Response(200, json={"vectors": vecs})

    return httpx.Client(transport=httpx.MockTransport(handler))


def test_remote_normalizes_and_caches():
    calls = []
    r = RemoteEmbedder("http://embed.test/embed", client=_fake_server(calls=calls))
    v = r.embed("rights")
    assert math.isclose(float(np.linalg.norm(v)), 1.0, abs_tol=1e-9)
    assert r.embed("rights").tobytes() == v.tobytes()
    r.embed_many(["rights", "law", "law"])
    assert calls == [["rights"], ["law"]]
    assert r.dimension == 4
    assert not r.embed("").any()


def test_remote_count_mismatch_is_protocol_error():
    client = httpx.Client(transport=httpx.MockTransport(lambda req: httpx.Response(200, json={"vectors": []})))
    with pytest.raises(ProtocolError):
        RemoteEmbedder("http://embed.test/embed", client=client).embed("x")


def test_remote_dimension_change_detected():
    sizes = iter([3, 5])

    def handler(req):
        n = next(sizes)
        return httpx.Response(200, json={"vectors": [[1.0] * n for _ in json.loads(req.content)["texts"]]})

    r = RemoteEmbedder("http://embed.test/embed", client=httpx.Client(transport=httpx.MockTransport(handler)))
    r.embed("a")
    with pytest.raises(DimensionMismatch):
        r.embed("b")


def test_remote_timeout_surfaces():
    def handler(req):
        raise httpx.ConnectTimeout("slow", request=req)

    r = RemoteEmbedder("http://embed.test/embed", client=httpx.Client(transport=httpx.MockTransport(handler)))
    with pytest.raises(RemoteUnavailable):
        r.embed("rights")


def test_remote_http_error_surfaces():
    client = httpx.Client(transport=httpx.MockTransport(lambda req: httpx.Response(500)))
    with pytest.raises(RemoteUnavailable):
        RemoteEmbedder("http://embed.test/embed", client=client).embed("rights")


def test_provider_config():
    assert isinstance(EmbeddingProviderConfig().make(), LocalHashEmbedder)
    assert isinstance(EmbeddingProviderConfig("remote", endpoint="http://x").make(), RemoteEmbedder)
    with pytest.raises(ConfigError):
        EmbeddingProviderConfig("remote")
    with pytest.raises(ConfigError):
        EmbeddingProviderConfig("sbert")
