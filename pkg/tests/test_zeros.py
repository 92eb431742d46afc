import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riemannqc.zeros import (
    ZeroFileError,
    ZeroTable,
    count_zeros_asymptotic,
    embedded_zeros,
    find_zeros_in_range,
    first_zeros,
    format_zeros,
    gram_points,
    load_zeros_file,
    rs_theta,
    rs_z,
    write_zeros_file,
)
from riemannqc.zeros.siegel import _PSI

# Imaginary parts from mpmath.zetazero (independent arbitrary-precision oracle).
MP_ZEROS = [14.134725141734694, 21.022039638771555, 25.010857580145689]
MP_ZERO_30 = 101.31785100573139
GRAM_0 = 17.845599540410861  # mpmath.findroot(siegeltheta, 17.8)


class TestZeroFile:
    def test_two_zeros(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("14.134725142\n21.022039639\n")
        t = load_zeros_file(p)
        assert len(t) == 2
        assert t.b[0] == 14.134725142
        assert abs(t.b[1] - MP_ZEROS[1]) < 1e-8
        assert list(t.index) == [1, 2]
        assert t.source.kind == "file"

    def test_empty(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("")
        assert len(load_zeros_file(p)) == 0

    def test_monotonicity_error_reports_line(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("21.0\n14.1\n")
        with pytest.raises(ZeroFileError, match=":2:"):
            load_zeros_file(p)

    def test_parse_error_reports_line(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("# header\n14.1\nabc\n")
        with pytest.raises(ZeroFileError, match=":3:"):
            load_zeros_file(p)

    def test_comments_and_max_count(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("# Odlyzko style\n14.134725142  # first\n\n21.022039639\n25.010857580\n")
        t = load_zeros_file(p, max_count=2)
        assert t.b.tolist() == [14.134725142, 21.022039639]

    def test_unreadable(self, tmp_path):
        with pytest.raises(ZeroFileError):
            load_zeros_file(tmp_path / "missing.txt")

    def test_below_first_zero_rejected(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("5.0\n")
        with pytest.raises(ZeroFileError):
            load_zeros_file(p)

    def test_round_trip_byte_stable(self, tmp_path, zeros100):
        p = tmp_path / "z.txt"
        write_zeros_file(zeros100, p)
        first = p.read_bytes()
        q = tmp_path / "z2.txt"
        write_zeros_file(load_zeros_file(p), q)
        assert q.read_bytes() == first
        assert format_zeros(load_zeros_file(p)).encode() == first


class TestZeroTable:
    def test_rejects_non_increasing(self):
        with pytest.raises(ValueError):
            ZeroTable.from_values([21.0, 14.0])

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            ZeroTable.from_values([3.0, 14.0])

    def test_items_carry_real_part(self, zeros100):
        z = zeros100[0]
        assert z.a == 0.5 and z.index == 1
        assert z.s == complex(0.5, z.b)

    def test_take_offset(self, zeros100):
        t = zeros100.take(3, offset=5)
        assert list(t.index) == [5, 6, 7]
        with pytest.raises(ValueError):
            zeros100.take(10, offset=95)


class TestTheta:
    def test_gram_zero(self):
        assert abs(rs_theta(GRAM_0)) < 1e-10
        assert abs(gram_points(0, 0)[0] - GRAM_0) < 1e-9

    def test_increasing(self):
        t = np.geomspace(10, 1e6, 20000)
        assert np.all(np.diff(rs_theta(t)) > 0)

    def test_against_arbitrary_precision(self):
        assert abs(rs_theta(100.0) - float(mpmath.siegeltheta(100))) < 1e-9

    def test_domain(self):
        with pytest.raises(ValueError):
            rs_theta(0.5)


class TestZ:
    def test_sign_change_at_first_zero(self):
        assert np.sign(rs_z(14.0)) != np.sign(rs_z(14.2))

    def test_small_at_first_zero(self):
        assert abs(rs_z(14.134725142)) < 1e-6

    def test_small_at_thirtieth_zero(self):
        assert abs(rs_z(101.3178510060000)) < 1e-6

    def test_domain(self):
        with pytest.raises(ValueError):
            rs_z(9.0)

    @pytest.mark.parametrize("t", [10.5, 37.2, 150.0, 399.9, 400.0, 1234.5, 98765.4])
    def test_against_mpmath(self, t):
        assert abs(rs_z(t) - float(mpmath.siegelz(t))) < 2e-9

    def test_vectorized_matches_scalar(self):
        ts = np.array([12.0, 390.0, 410.0, 5000.0])
        assert np.allclose(rs_z(ts), [rs_z(float(t)) for t in ts], rtol=0, atol=1e-13)

    def test_psi_coefficients(self):
        with mpmath.workdps(60):
            ref = mpmath.taylor(
                lambda p: mpmath.cos(2 * mpmath.pi * (p * p - p - mpmath.mpf(1) / 16))
                / mpmath.cos(2 * mpmath.pi * p),
                mpmath.mpf(1) / 2,
                12,
            )
        assert np.allclose(_PSI[:13], [float(c) for c in ref], rtol=1e-12, atol=1e-12)


class TestFindZeros:
    def test_first_three(self):
        t = find_zeros_in_range(10, 30)
        assert len(t) == 3
        assert np.allclose(t.b, MP_ZEROS, atol=1e-9)
        assert list(t.index) == [1, 2, 3]

    def test_first_thirty(self):
        t = find_zeros_in_range(10, 102)
        assert len(t) == 30
        assert abs(t.b[-1] - 101.3178510060) < 1e-6
        assert abs(t.b[-1] - MP_ZERO_30) < 1e-9

    def test_empty_window(self):
        assert len(find_zeros_in_range(20, 21)) == 0

    def test_unknown_ordinals_above_14(self):
        t = find_zeros_in_range(20, 30)
        assert list(t.index) == [0, 0]

    def test_bad_window(self):
        with pytest.raises(ValueError):
            find_zeros_in_range(5, 20)

    def test_roots_are_roots(self):
        t = find_zeros_in_range(10, 500)
        assert np.all(np.abs(rs_z(t.b)) < 1e-6)
        assert np.all(np.sign(rs_z(t.b - 1e-8)) != np.sign(rs_z(t.b + 1e-8)))

    def test_lehmer_like_close_pair(self):
        # two zeros 0.043 apart near t = 5229.2 (mpmath.zetazero 4767, 4768)
        t = find_zeros_in_range(5229.0, 5229.5)
        assert len(t) == 2
        assert np.allclose(t.b, [5229.198557199, 5229.241811259], atol=1e-8)

    def test_count_matches_exact_count(self):
        t = find_zeros_in_range(10, 15200)
        assert len(t) == mpmath.nzeros(15200)

    def test_missed_zero_warning(self, monkeypatch):
        from riemannqc.zeros import table

        # pretend the counting function expects 30 zeros where there are 12
        monkeypatch.setattr(table, "_smooth_count", lambda t: 30.0 if t > 50 else 0.0)
        with pytest.warns(RuntimeWarning):
            table.find_zeros_in_range(20, 60)

    @settings(max_examples=15, deadline=None)
    @given(st.floats(18.0, 480.0), st.floats(5.0, 120.0))
    def test_count_tracks_asymptotic(self, t_lo, width):
        t_hi = min(t_lo + width, 500.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            found = len(find_zeros_in_range(t_lo, t_hi))
        approx = count_zeros_asymptotic(t_hi) - count_zeros_asymptotic(t_lo)
        assert abs(found - approx) <= 2


class TestEmbedded:
    def test_size_and_ordinals(self, zeros100):
        assert len(zeros100) == 100
        assert list(zeros100.index) == list(range(1, 101))

    def test_matches_arbitrary_precision(self, zeros100):
        with mpmath.workdps(25):
            ref = [float(mpmath.zetazero(j).imag) for j in (1, 2, 10, 30, 57, 100)]
        got = zeros100.b[[0, 1, 9, 29, 56, 99]]
        assert np.allclose(got, ref, atol=1e-9)

    def test_matches_finder(self, zeros100):
        t = find_zeros_in_range(10, 240)
        assert np.allclose(t.b[:100], zeros100.b, atol=1e-9)
        assert np.allclose(t.b[:10], zeros100.b[:10], atol=1e-6)

    def test_first_zeros_beyond_table(self, zeros100):
        t = first_zeros(120)
        assert len(t) == 120
        assert np.allclose(t.b[:100], zeros100.b, atol=1e-9)
        assert t.index[-1] == 120

    def test_embedded_is_cached(self):
        assert embedded_zeros() is embedded_zeros()


class TestCounting:
    def test_thirtieth(self):
        assert count_zeros_asymptotic(101.3179) == pytest.approx(28.70916, abs=1e-4)

    def test_large(self):
        assert count_zeros_asymptotic(120000.3764) == pytest.approx(169163.8959, abs=1e-3)

    def test_origin(self):
        with pytest.raises(ValueError):
            count_zeros_asymptotic(2 * math.pi * math.e)
        assert count_zeros_asymptotic(2 * math.pi * math.e * (1 + 1e-12)) == pytest.approx(0, abs=1e-9)


def test_prefix_independent_of_height():
    from riemannqc.zeros.table import height_for_count

    short = find_zeros_in_range(10, round(height_for_count(300), 3))
    long = find_zeros_in_range(10, round(height_for_count(3000), 3))
    assert len(short) >= 300
    assert np.array_equal(short.b[:300], long.b[:300])
