import numpy as np
import pytest

from cutpoint.linalg import gell_mann_basis
from cutpoint.linearize import channel_matrix, coords, from_coords, linearization, qfa_to_gfa
from cutpoint.models import GQFA, Channel, apply_channel, eval_gfa, eval_qfa, identity_channel
from cutpoint.samplers import random_channel, random_density, random_gqfa, random_hermitian
from cutpoint.verify import enumerate_words
from cutpoint.witness import build_witness, witness_word

R2 = 1 / np.sqrt(2)


def test_coords_examples(rng):
    b = gell_mann_basis(2)
    assert np.abs(coords(np.eye(2) / 2, b) - [R2, 0, 0, 0]).max() < 1e-15
    # Tr(sigma_z |1><1|) = 1, scaled by 1/sqrt(2)
    assert np.abs(coords(np.diag([1.0, 0.0]), b) - [R2, 0, 0, R2]).max() < 1e-15
    for n in (2, 3, 4):
        basis = gell_mann_basis(n)
        rho = random_density(rng, n)
        assert np.abs(from_coords(coords(rho, basis), basis) - rho).max() < 1e-9


def test_coords_errors():
    with pytest.raises(ValueError):
        coords(np.array([[0, 1], [0, 0]]), gell_mann_basis(2))
    with pytest.raises(ValueError):
        coords(np.eye(3) / 3, gell_mann_basis(2))


def test_channel_matrix_identity():
    M = channel_matrix(identity_channel(3), gell_mann_basis(3))
    assert np.abs(M - np.eye(9)).max() < 1e-12


def test_channel_matrix_replacement():
    Q = build_witness(2)
    basis = gell_mann_basis(2)
    rho_k = Q.params.rho(1)
    M = channel_matrix(Q.channel("p1"), basis)
    # Phi(B_j) = Tr(B_j) rho_k
    want = np.outer(coords(rho_k, basis), [np.trace(b).real for b in basis])
    assert np.abs(M - want).max() < 1e-12


def test_channel_matrix_tracks_states(rng):
    for n in (2, 3):
        basis = gell_mann_basis(n)
        for _ in range(10):
            E = random_channel(rng, n)
            M = channel_matrix(E, basis)
            rho = random_density(rng, n)
            assert np.abs(coords(apply_channel(E, rho), basis) - M @ coords(rho, basis)).max() < 1e-9
            # Hermitian but not a state: linearity beyond the simplex
            h = random_hermitian(rng, n)
            assert np.abs(coords(apply_channel(E, h), basis) - M @ coords(h, basis)).max() < 1e-9


def test_channel_matrix_composition(rng):
    basis = gell_mann_basis(3)
    for _ in range(5):
        E, F = random_channel(rng, 3), random_channel(rng, 3)
        # F after E: Kraus products F_i E_j
        FE = Channel.from_kraus([f @ e for f in F.kraus for e in E.kraus])
        M = channel_matrix(FE, basis)
        assert np.abs(M - channel_matrix(F, basis) @ channel_matrix(E, basis)).max() < 1e-9


def test_channel_matrix_dimension_mismatch():
    with pytest.raises(ValueError):
        channel_matrix(identity_channel(2), gell_mann_basis(3))


def test_identity_channels_give_constant(rng):
    rho0 = random_density(rng, 2)
    proj = np.diag([1.0, 0.0])
    Q = GQFA.build(rho0, {"a": identity_channel(2), "b": identity_channel(2)}, proj)
    G = qfa_to_gfa(Q)
    for w in enumerate_words("ab", 3):
        assert abs(eval_gfa(G, w) - rho0[0, 0].real) < 1e-12


def test_witness_linearization_agrees():
    Q = build_witness(2, tests="all")
    G = qfa_to_gfa(Q)
    assert G.k == 4 and G.alphabet == Q.alphabet and G.cutpoint == 0.5
    for k in (1, 2, 3):
        for s in [t for t in Q._tests]:
            w = witness_word(k, s)
            assert abs(eval_gfa(G, w) - eval_qfa(Q, w)) < 1e-9


def test_random_qfa_n3_all_words(rng):
    Q = random_gqfa(rng, 3)
    G = qfa_to_gfa(Q)
    assert G.k == 9
    worst = max(abs(eval_gfa(G, w) - eval_qfa(Q, w)) for w in enumerate_words("ab", 4))
    assert worst < 1e-9


def test_end_channel_is_folded(rng):
    from cutpoint.models import pfa_as_qfa
    from cutpoint.samplers import random_pfa

    P = random_pfa(rng, 3)
    Q = pfa_as_qfa(P)
    G = qfa_to_gfa(Q)
    for w in enumerate_words("ab", 3):
        assert abs(eval_gfa(G, w) - eval_qfa(Q, w)) < 1e-9


def test_context_fields(rng):
    Q = random_gqfa(rng, 2)
    ctx = linearization(Q)
    assert ctx.nu.shape == (4,) and set(ctx.M) == {"a", "b"}
    for j, b in enumerate(ctx.basis):
        image = apply_channel(Q.channel("a"), b)
        assert np.abs(image - from_coords(ctx.M["a"][:, j], ctx.basis)).max() < 1e-9
