"""Smoke test for the `toffoli` extension module.

Build and install first:

    pip install maturin
    maturin develop -m crates/py/Cargo.toml --release
"""

import math

import toffoli


def main():
    seq = toffoli.toffoli_sequence()
    assert len(seq) == 15
    assert abs(seq.duration() - 1.410e-3) < 5e-6

    dev = toffoli.unitary_deviation(seq)
    assert dev < 1e-9, dev

    u = toffoli.gate_unitary(seq)
    ref = toffoli.reference_unitary()
    overlap = abs(sum(ref[i][j].conjugate() * u[i][j] for i in range(8) for j in range(8))) / 8
    assert abs(overlap - 1.0) < 1e-9

    text = seq.serialize()
    assert toffoli.PulseSequence.parse(text).pulses() == seq.pulses()

    ideal = toffoli.simulate_process(seq)
    table = ideal.truth_table(shots=0)
    assert abs(table[6][7] - 1.0) < 1e-9 and abs(table[7][6] - 1.0) < 1e-9
    chi = ideal.chi()
    assert abs(chi.trace() - 1.0) < 1e-9
    assert chi.labels[0] == "III" and len(chi.labels) == 64

    noisy = toffoli.simulate_process(seq, noise=toffoli.NoiseConfig(epsilon=0.07, detuning_hz=100.0))
    est, se, cross = noisy.mean_gate_fidelity(samples=4000, seed=3)
    assert 0.68 <= est <= 0.88, est
    assert abs(est - cross) < 3 * se
    assert noisy.process_fidelity() < 1.0
    assert math.isclose(noisy.chi().fidelity(), noisy.process_fidelity(), abs_tol=1e-9)

    try:
        toffoli.PulseSequence.parse("sb 1 pi")
    except ValueError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("malformed sequence accepted")

    print(f"ok: deviation {dev:.1e}, noisy F_mean {est:.3f} +/- {se:.3f}")


if __name__ == "__main__":
    main()
