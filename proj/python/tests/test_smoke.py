import math

import pytest

import morsewell as mw


@pytest.fixture
def published():
    return mw.MorseParams.symmetric(alpha=1.0, gamma=1.8, shift=1.0)


def test_params_round_trip(published):
    assert published.gamma1 == published.gamma2 == 1.8
    assert published == mw.MorseParams(1.0, 1.8, 1.8, 1.0)
    assert mw.v_sym(-2.5, published) == mw.v_sym(2.5, published)
    assert mw.v_single_well(0.3, published) == -mw.v_sym(0.3, published)


def test_ground_and_first_excited_brackets(published):
    entries = mw.spectrum(published, 1)
    assert [e.parity for e in entries] == [mw.Parity.even, mw.Parity.odd]
    ground, excited = (e.bracket for e in entries)
    assert ground.k_lo <= 1.3557626 <= ground.k_hi
    assert excited.k_lo <= 1.2681110 <= excited.k_hi
    assert ground.width < 1e-6
    assert ground.E_lo == pytest.approx(-ground.k_hi**2, rel=1e-15)


def test_regular_wave_is_symmetric(published):
    b = mw.bracket_level(published, 0, mw.Parity.even, 1e-8)
    wave = mw.build_regular(published, b.k_mid, mw.Parity.even)
    left, right = wave.eval(-1.7), wave.eval(1.7)
    assert left[0] == pytest.approx(right[0], rel=1e-12)
    assert left[1] == pytest.approx(-right[1], rel=1e-10)


def test_oracle_agrees_with_bracket(published):
    b = mw.bracket_level(published, 0, mw.Parity.even, 1e-9)
    level = mw.oracle_eigenvalue(published, 0, mw.Parity.even)
    assert b.E_lo - 1e-8 <= level.E <= b.E_hi + 1e-8


def test_full_line_morse_closed_form():
    params = mw.MorseParams(1.0, 1.8, 1.0, 0.0)
    exact = mw.exact_full_line_morse_spectrum(params)
    assert len(exact) == 3
    chain = mw.full_line_morse_chain(params)
    b = mw.bracket_secular(chain, 0, 1e-9)
    assert b.E_lo - 1e-9 <= exact[0] <= b.E_hi + 1e-9


def test_square_well_chain():
    v0, a = 4.0, 1.0
    b = mw.bracket_secular(mw.square_well_chain(v0, a), 0, 1e-10)
    k = b.k_mid
    q = math.sqrt(v0 - k * k)
    assert q * math.tan(q * a) == pytest.approx(k, abs=1e-8)
    solved = mw.solve_chain(mw.square_well_chain(v0, a).at_energy(-k * k))
    assert solved.psi(0.2) == pytest.approx(solved.psi(-0.2), rel=1e-6)


def test_chain_json():
    text = """{"segments": [
        {"type": "constant", "params": {"V": 0.0}, "a_left": null, "a_right": -1.0},
        {"type": "constant", "params": {"V": -4.0}, "a_left": -1.0, "a_right": 1.0},
        {"type": "constant", "params": {"V": 0.0}, "a_left": 1.0, "a_right": null}]}"""
    chain = mw.chain_from_json(text)
    assert len(chain) == 3
    assert chain.potential(0.0) == -4.0


def test_special_functions():
    assert mw.kummer_m(1.0, 1.0, 0.7) == pytest.approx(math.exp(0.7), rel=1e-14)
    z, mu = 1.3, 0.25
    assert mw.whittaker_m(0.0, mu, z) > 0.0
    assert mw.whittaker_w(0.5, 0.0, z) == pytest.approx(math.sqrt(z) * math.exp(-z / 2), rel=1e-12)


def test_missing_level_raises(published):
    with pytest.raises(mw.NoSuchLevel):
        mw.bracket_level(published, 50, mw.Parity.even)
    with pytest.raises(mw.MorsewellError):
        mw.bracket_level(published, 50, mw.Parity.even)


def test_bad_parameters_raise():
    with pytest.raises(mw.MorsewellError):
        mw.MorseParams(-1.0, 1.0, 1.0, 0.0).validate()


def test_cli_in_process():
    code, out, err = mw.run_cli(["spectrum", "--levels", "2", "--format", "json"])
    assert code == 0, err
    assert '"levels"' in out
    code, out, err = mw.run_cli(["spectrum", "--potential", "morse", "--d", "0", "--gamma1", "1.8", "--gamma2", "1", "--levels", "99"])
    assert code == 2
    assert "warning" in err.lower()
    assert mw.run_cli(["spectrum", "--bogus"])[0] == 1


def test_chain_file_matches_builder():
    import pathlib
    path = pathlib.Path(__file__).resolve().parents[2] / "data" / "chains" / "square_well.json"
    from_file = mw.bracket_secular(mw.read_chain_file(str(path)), 0, 1e-10)
    built = mw.bracket_secular(mw.square_well_chain(4.0, 1.0), 0, 1e-10)
    assert from_file.k_lo == pytest.approx(built.k_lo, abs=1e-12)
