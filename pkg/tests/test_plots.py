import numpy as np

from qwalk_nm import plots
from qwalk_nm.spectral import Peak


def is_svg(path):
    data = path.read_bytes()
    return b"<svg" in data[:500] and b"<script" not in data


def test_distribution_figure(tmp_path):
    path = tmp_path / "d.svg"
    positions = np.arange(-10, 11)
    dist = np.exp(-0.1 * positions.astype(float) ** 2)
    dist /= dist.sum()
    plots.save_distribution(str(path), positions, dist, "test walk")
    assert is_svg(path)


def test_step_series_figure(tmp_path):
    path = tmp_path / "s.svg"
    plots.save_step_series(str(path), {"a": np.arange(20.0), "b": np.ones(20)}, "value")
    assert is_svg(path)


def test_variance_sweep_figure(tmp_path):
    path = tmp_path / "v.svg"
    curves = {5.0: ([0.1, 0.5, 1.0], [400.0, 120.0, 60.0]),
              0.001: ([0.1, 0.5, 1.0], [800.0, 70.0, 66.0])}
    plots.save_variance_sweep(str(path), curves, 100.0, 2900.0)
    assert is_svg(path)


def test_spectrum_report_figure(tmp_path):
    path = tmp_path / "p.svg"
    n = 64
    steps = np.arange(n)
    values = np.exp(-0.02 * steps) + 0.1 * np.cos(2 * np.pi * 0.25 * steps)
    fitted = np.exp(-0.02 * steps)
    freq = np.arange(n) / n
    power = np.abs(np.fft.fft(values - fitted)) ** 2
    peaks = [Peak(0.25, float(power[16]), (0.2, 0.35))]
    plots.save_spectrum_report(str(path), steps, values, fitted, freq, power,
                               peaks, [(0.0, 0.1), (0.2, 0.35)])
    assert is_svg(path)


def test_reruns_produce_identical_bytes(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    series = {"x": np.linspace(1.0, 0.0, 30)}
    plots.save_step_series(str(a), series, "value")
    plots.save_step_series(str(b), series, "value")
    assert a.read_bytes() == b.read_bytes()
