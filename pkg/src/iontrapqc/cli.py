"""Command-line entry point: ``iontrapqc <subcommand> ...``.

Every run writes exactly one document: JSON (default) or CSV to stdout, or to
a file when ``--output`` is given or ``IONTRAPQC_OUTPUT_DIR`` is set. Errors
go to stderr as a JSON object and the exit status is nonzero. Frequencies on
the command line are ordinary frequencies (Hz, kHz, MHz); internally the
package works with angular frequencies (rad/s) and the conversion is x 2 pi.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from iontrapqc import __version__
from iontrapqc.constants import TWO_PI, doppler_limit

OUTPUT_DIR_ENV = "IONTRAPQC_OUTPUT_DIR"
EXIT_FAILED_CHECKS = 1
EXIT_ERROR = 3
EXIT_USAGE = 2

CONVENTIONS = {
    "frequency_inputs": "ordinary frequencies; angular = 2 pi x ordinary",
    "frequency_outputs": "fields suffixed _hz/_khz/_mhz are ordinary frequencies; _rad_s fields are angular",
    "lengths": "suffix gives the unit (_m, _um, _nm)",
    "state_basis": "phonon number outermost, then ion N-1 ... ion 0; ket labels list ion N-1 first",
    "readout": "|0> bright reads '0', |1> and |aux> dark read '1'",
}


class CliError(Exception):
    """Bad command-line input that argparse itself cannot detect."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("UsageError", message)
        sys.exit(EXIT_USAGE)


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"type": kind, "message": message}}, sort_keys=True) + "\n")


# Serialization ------------------------------------------------------------------


def _clean(value):
    """Convert numpy and complex values into deterministic JSON-ready objects."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return [_clean(v) for v in sorted(value)]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [_clean(float(value.real)), _clean(float(value.imag))]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _json_text(doc: dict) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv_text(header: list[str], rows, meta: dict) -> str:
    buffer = io.StringIO()
    buffer.write(f"# iontrapqc {__version__}\n")
    buffer.write("# config: " + json.dumps(_clean(meta), sort_keys=True) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buffer.getvalue()


def _config(args) -> dict:
    skip = {"handler", "func_name"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _document(args, result: dict, caught=()) -> dict:
    doc = {
        "artifact": "iontrapqc",
        "version": __version__,
        "command": args.func_name,
        "config": _config(args),
        "result": result,
    }
    if caught:
        doc["warnings"] = sorted({str(w.message) for w in caught})
    if getattr(args, "conventions", False):
        doc["conventions"] = CONVENTIONS
    return doc


def _write(args, text: str, extension: str) -> None:
    target = getattr(args, "output", None)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if target is None and base:
        target = f"{args.func_name.replace(' ', '_')}.{extension}"
    if target is None:
        sys.stdout.write(text)
        return
    path = Path(target)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


# Handlers -------------------------------------------------------------------------


def _species(args):
    from iontrapqc.species import load_species

    return load_species(args.file or args.ion)


def cmd_species(args):
    species = _species(args)
    transitions = []
    for tr in species.transitions:
        entry = {
            "label": tr.label,
            "kind": tr.kind,
            "wavelength_nm": tr.wavelength * 1e9,
            "einstein_a_per_s": tr.einstein_a,
            "upper_lifetime_s": tr.lifetime,
            "branching_ratio": tr.branching_ratio,
            "linewidth_mhz": tr.linewidth / TWO_PI / 1e6,
        }
        if tr.kind == "dipole":
            entry["doppler_limit_uk"] = doppler_limit(tr.linewidth) * 1e6
        transitions.append(entry)
    return {"name": species.name, "mass_kg": species.mass, "charge_multiplier": species.charge_multiplier, "transitions": transitions}


def cmd_chain(args):
    from iontrapqc.chain import ChainConfig, build_chain, force_residual, min_spacing

    species = _species(args)
    if args.sweep_khz:
        start, stop, count = args.sweep_khz
        rows = []
        for khz in np.linspace(start, stop, int(count)):
            spacing = min_spacing(args.n, TWO_PI * khz * 1e3, species)
            rows.append((float(khz), spacing.fit * 1e6, spacing.exact * 1e6))
        return ["axial_khz", "min_spacing_fit_um", "min_spacing_exact_um"], rows
    config = ChainConfig(species, args.n, TWO_PI * args.axial_khz * 1e3)
    model = build_chain(config)
    if args.format == "csv":
        rows = [(i, p * 1e6, u) for i, (p, u) in enumerate(zip(model.positions, model.scaled_positions))]
        return ["ion", "position_um", "scaled_position"], rows
    spacing = None
    if args.n >= 2:
        ms = min_spacing(args.n, config.axial_frequency, species)
        spacing = {"fit": ms.fit * 1e6, "exact": ms.exact * 1e6, "relative_difference": ms.relative_difference}
    return {
        "length_scale_um": model.length_scale * 1e6,
        "positions_um": model.positions * 1e6,
        "scaled_positions": model.scaled_positions,
        "mode_frequencies": model.mode_frequencies,
        "mode_vectors": model.mode_vectors,
        "coupling_constants": model.coupling_constants,
        "min_spacing_um": spacing,
        "max_force_residual": float(np.max(np.abs(force_residual(model.scaled_positions)))),
    }


def cmd_trap(args):
    from iontrapqc.chain import max_linear_ions, min_spacing
    from iontrapqc.trap import CONVENTIONS as TRAP_CONVENTIONS
    from iontrapqc.trap import TrapConfig, crosstalk, trap_report

    species = _species(args)
    trap = TrapConfig(
        species,
        rf_amplitude=args.rf_volts,
        rf_frequency=TWO_PI * args.rf_mhz * 1e6,
        r0=args.r0_mm * 1e-3,
        dc_offset=args.dc_volts,
        endcap_voltage=args.endcap_volts,
        shielding_factor=args.kappa,
    )
    report = trap_report(trap, args.temperature_k)
    w_r = TWO_PI * args.radial_mhz * 1e6 if args.radial_mhz else report.secular_frequency
    w_x = report.axial_frequency
    result = {
        "mathieu_a": report.mathieu_a,
        "mathieu_q": report.mathieu_q,
        "secular_frequency_mhz": report.secular_frequency / TWO_PI / 1e6,
        "pseudo_well_depth_ev": report.pseudo_well_depth,
        "axial_frequency_khz": w_x / TWO_PI / 1e3,
        "localization_radius_nm": None if report.localization_radius is None else report.localization_radius * 1e9,
        "temperature_k": report.temperature,
        "flags": list(report.flags),
        "radial_frequency_used_mhz": w_r / TWO_PI / 1e6,
        "max_linear_ions": max_linear_ions(w_r, w_x) if 0 < w_x <= w_r else None,
        "conventions": TRAP_CONVENTIONS,
    }
    if args.spot_um is not None:
        if args.ions is None or args.ions < 2 or w_x <= 0:
            raise CliError("--spot-um needs --ions >= 2 and a nonzero endcap voltage")
        spacing = min_spacing(args.ions, w_x, species).exact
        result["min_spacing_um"] = spacing * 1e6
        result["crosstalk"] = crosstalk(spacing, args.spot_um * 1e-6)
    return result


def cmd_laser(args):
    from iontrapqc.laser import LaserParams, tolerance_report

    species = _species(args)
    label = args.transition or ("S1/2-D5/2" if args.scheme == "single" else "S1/2-P1/2")
    transition = species.transition(label)
    wavelength = args.wavelength_nm * 1e-9 if args.wavelength_nm else transition.wavelength
    kwargs = dict(
        scheme=args.scheme,
        wavelength=wavelength,
        polarization_factor=args.polarization,
        spot_radius=args.spot_um * 1e-6,
    )
    if args.scheme == "single":
        kwargs["axial_projection"] = math.sin(math.radians(args.projection_deg))
    else:
        if args.raman_detuning_mhz is None or args.pump_projection is None or args.stokes_projection is None:
            raise CliError("raman scheme needs --raman-detuning-mhz, --pump-projection and --stokes-projection")
        kwargs.update(
            raman_detuning=TWO_PI * args.raman_detuning_mhz * 1e6,
            pump_projection=args.pump_projection,
            stokes_projection=args.stokes_projection,
        )
    params = LaserParams(**kwargs)
    w_x = TWO_PI * args.axial_khz * 1e3
    report = tolerance_report(params, species, transition, args.ions, w_x, args.tu_us * 1e-6, args.error_scheme)
    est = report.power_estimate
    return {
        "eta": report.eta,
        "t_v_min_s": report.t_v_min,
        "t_u_min_traveling_s": report.t_u_min_traveling,
        "t_u_min_standing_s": report.t_u_min_standing,
        "power_w": report.power,
        "gate_error": report.gate_error,
        "derivation": {
            "rabi_one_rad_s": est.rabi_one,
            "rabi_zero_rad_s": est.rabi_zero,
            "field_v_per_m": est.field,
            "printed_closed_form_value": est.printed_formula_value,
            "steps": est.derivation,
        },
        "assumptions": {
            "axial_projection": params.axial_projection if args.scheme == "single" else None,
            "axial_wavenumber_per_m": params.axial_wavenumber,
            "polarization_factor": params.polarization_factor,
            "einstein_a_per_s": transition.einstein_a,
            "transition": transition.label,
            "wavelength_nm": wavelength * 1e9,
            "ac_stark_shifts": "ignored",
        },
    }


def cmd_pulse_run(args):
    from iontrapqc.pulse.gates import load_sequence, run_sequence
    from iontrapqc.pulse.readout import AUX_FLAG_THRESHOLD, measure, outcome_probabilities, sample_counts
    from iontrapqc.pulse.register import RegisterSpace, StateVector

    if not args.seq:
        raise CliError("pulse run needs --seq FILE")
    space = RegisterSpace(args.ions, args.nmax)
    initial = args.initial or "0" * args.ions
    pulses = load_sequence(args.seq)
    for p in pulses:
        space.check_ion(p.ion)
    state = run_sequence(StateVector.basis(space, initial, 0), pulses, ladder=args.ladder)
    probs = outcome_probabilities(state)
    result = {
        "initial": initial,
        "pulses": [p.to_dict() for p in pulses],
        "amplitudes": state.to_dict(threshold=1e-15),
        "readout_probabilities": {format(k, f"0{args.ions}b"): float(p) for k, p in enumerate(probs)},
        "phonon_populations": state.phonon_populations(),
        "aux_population": state.aux_population(),
        "aux_flag": state.aux_population() > AUX_FLAG_THRESHOLD,
    }
    if args.shots:
        result["counts"] = sample_counts(state, args.shots, args.seed)
    else:
        result["measurement"] = measure(state, args.seed).bits
    return result


def _matrix_doc(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def cmd_pulse_cnot_verify(args):
    from iontrapqc.pulse.gates import cnot_sequence
    from iontrapqc.pulse.verify import verify_cnot

    rep = verify_cnot(args.control, args.target, args.ions, args.nmax)
    raw = verify_cnot(args.control, args.target, args.ions, args.nmax, verbatim=True)
    return {
        "basis_order": ["|c t> = |00>", "|01>", "|10>", "|11>"],
        "sequence": [p.to_dict() for p in cnot_sequence(args.control, args.target)],
        "matrix": _matrix_doc(rep.matrix),
        "fidelity": rep.fidelity,
        "max_state_distance": rep.max_state_distance,
        "leakage": rep.leakage,
        "relative_phases_rad": rep.relative_phases,
        "squared_identity_error": rep.squared_identity_error,
        "passed": rep.passed,
        "same_phase_variant": {
            "sequence": [p.to_dict() for p in cnot_sequence(args.control, args.target, verbatim=True)],
            "matrix": _matrix_doc(raw.matrix),
            "fidelity": raw.fidelity,
            "leakage": raw.leakage,
        },
    }


def cmd_pulse_scan(args):
    from iontrapqc.pulse.dynamics import loglog_slope, u_pulse_scan

    start, stop, count = args.tu_range
    multiples = np.geomspace(start, stop, int(count))
    points = u_pulse_scan(multiples, args.eta, args.ions, TWO_PI * args.axial_khz * 1e3, args.nmax)
    if args.format == "csv":
        return ["t_u_s", "multiple_of_bound", "infidelity"], [(p.duration, p.multiple, p.infidelity) for p in points]
    return {
        "points": [{"t_u_s": p.duration, "multiple_of_bound": p.multiple, "infidelity": p.infidelity, "steps": p.steps} for p in points],
        "loglog_slope": loglog_slope(points) if len(points) > 1 else None,
    }


def cmd_shor_factor(args):
    from iontrapqc.shor.algorithm import factor

    outcome = factor(args.n, args.seed, args.attempts, args.mode)
    doc = outcome.to_dict()
    doc["verified"] = bool(outcome.factors) and math.prod(sorted(outcome.factors)) == args.n
    return doc


def cmd_shor_estimate(args):
    from iontrapqc.shor.resources import SECONDS_PER_DAY, nfs_wall_clock, resource_estimate

    est = resource_estimate(args.bits, args.clock_mhz * 1e6).to_dict()
    if args.bits >= 2:
        seconds = nfs_wall_clock(args.bits, args.machines, args.mips)
        est["nfs_fleet"] = {"machines": args.machines, "mips_per_machine": args.mips, "seconds": seconds, "days": seconds / SECONDS_PER_DAY}
    return est


def cmd_shor_qft_demo(args):
    from iontrapqc.shor.register import QubitRegister, qft

    if args.period < 1:
        raise CliError("--period must be positive")
    size = 2**args.qubits
    amps = np.zeros(size, dtype=complex)
    comb = np.arange(args.offset % args.period, size, args.period)
    amps[comb] = 1 / math.sqrt(comb.size)
    register = QubitRegister(args.qubits, {"all": tuple(range(args.qubits))}, amps)
    probs = qft(register, "all").distribution("all")
    if args.format == "csv":
        return ["value", "probability"], [(k, float(p)) for k, p in enumerate(probs)]
    peaks = [round(j * size / args.period) % size for j in range(args.period)]
    return {"probabilities": probs, "peaks": peaks, "peak_mass": float(sum(probs[p] for p in set(peaks)))}


HANDLERS = {
    "species": (cmd_species, "species"),
    "chain": (cmd_chain, "chain"),
    "trap": (cmd_trap, "trap"),
    "laser": (cmd_laser, "laser"),
    "pulse run": (cmd_pulse_run, "pulse"),
    "pulse cnot-verify": (cmd_pulse_cnot_verify, "pulse"),
    "pulse scan": (cmd_pulse_scan, "pulse"),
    "shor factor": (cmd_shor_factor, "shor"),
    "shor estimate": (cmd_shor_estimate, "shor"),
    "shor qft-demo": (cmd_shor_qft_demo, "shor"),
}


# Parser ---------------------------------------------------------------------------


def _common(parser, formats=("json",)):
    parser.add_argument("--format", choices=formats, default=formats[0])
    parser.add_argument("--output", help=f"output file (relative paths resolve against ${OUTPUT_DIR_ENV})")
    parser.add_argument("--conventions", action="store_true", help="echo the unit and basis conventions")
    parser.add_argument("--reference-examples", action="store_true", help="evaluate the published worked examples for this module")


def _ion(parser):
    parser.add_argument("--ion", default="ca40", help="bundled species name")
    parser.add_argument("--file", help="species JSON document (overrides --ion)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="iontrapqc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"iontrapqc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("species", help="species record and derived linewidths")
    _ion(p)
    _common(p)
    p.set_defaults(func_name="species")

    p = sub.add_parser("chain", help="equilibrium positions and axial modes")
    _ion(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--axial-khz", type=float, default=200.0)
    p.add_argument("--sweep-khz", type=float, nargs=3, metavar=("START", "STOP", "COUNT"), help="CSV of minimum spacing against axial frequency")
    _common(p, ("json", "csv"))
    p.set_defaults(func_name="chain")

    p = sub.add_parser("trap", help="Paul trap parameters")
    _ion(p)
    p.add_argument("--rf-volts", type=float, default=500.0)
    p.add_argument("--rf-mhz", type=float, default=11.5)
    p.add_argument("--r0-mm", type=float, default=1.4)
    p.add_argument("--endcap-volts", type=float, default=150.0)
    p.add_argument("--dc-volts", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=1.0, help="endcap shielding relative to the calibration")
    p.add_argument("--temperature-k", type=float)
    p.add_argument("--radial-mhz", type=float, help="override the radial frequency used for the ion-number limit")
    p.add_argument("--spot-um", type=float, help="1/e^2 spot diameter for the crosstalk estimate")
    p.add_argument("--ions", type=int)
    _common(p)
    p.set_defaults(func_name="trap")

    p = sub.add_parser("laser", help="pulse-duration bounds, power and error budget")
    _ion(p)
    p.add_argument("--scheme", choices=("single", "raman"), default="single")
    p.add_argument("--ions", type=int, default=10)
    p.add_argument("--axial-khz", type=float, default=500.0)
    p.add_argument("--projection-deg", type=float, default=10.0, help="beam angle from the normal to the string")
    p.add_argument("--tu-us", type=float, default=5.0, help="U-pulse duration for the power estimate")
    p.add_argument("--spot-um", type=float, default=10.0, help="1/e^2 intensity radius w0")
    p.add_argument("--polarization", type=float, default=1.0)
    p.add_argument("--transition")
    p.add_argument("--wavelength-nm", type=float)
    p.add_argument("--raman-detuning-mhz", type=float)
    p.add_argument("--pump-projection", type=float)
    p.add_argument("--stokes-projection", type=float)
    p.add_argument("--error-scheme", choices=("standing", "traveling", "raman"))
    _common(p)
    p.set_defaults(func_name="laser")

    pulse = sub.add_parser("pulse", help="pulse-level register simulation").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = pulse.add_parser("run", help="apply a JSON pulse sequence")
    p.add_argument("--ions", type=int, default=2)
    p.add_argument("--nmax", type=int, default=1)
    p.add_argument("--seq")
    p.add_argument("--initial", help="ket label, ion N-1 first (default all 0)")
    p.add_argument("--ladder", action="store_true", help="sqrt(n+1) sideband scaling on all phonon levels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shots", type=int, default=0)
    _common(p)
    p.set_defaults(func_name="pulse run")

    p = pulse.add_parser("cnot-verify", help="extract the five-pulse CNOT matrix")
    p.add_argument("--control", type=int, default=1)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--ions", type=int, default=2)
    p.add_argument("--nmax", type=int, default=1)
    p.add_argument("--report", dest="format", choices=("json",), default="json")
    p.add_argument("--output")
    p.add_argument("--conventions", action="store_true")
    p.add_argument("--reference-examples", action="store_true")
    p.set_defaults(func_name="pulse cnot-verify")

    p = pulse.add_parser("scan", help="exact U-pulse infidelity against duration")
    p.add_argument("--tu-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"), default=(10.0, 100.0, 5), help="multiples of the traveling-wave bound, log spaced")
    p.add_argument("--eta", type=float, default=0.3)
    p.add_argument("--ions", type=int, default=1)
    p.add_argument("--axial-khz", type=float, default=500.0)
    p.add_argument("--nmax", type=int, default=3)
    _common(p, ("csv", "json"))
    p.set_defaults(func_name="pulse scan")

    shor = sub.add_parser("shor", help="factoring simulation and resource estimates").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = shor.add_parser("factor")
    p.add_argument("--n", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempts", type=int, default=32)
    p.add_argument("--mode", choices=("deferred", "literal"), default="deferred")
    _common(p)
    p.set_defaults(func_name="shor factor")

    p = shor.add_parser("estimate")
    p.add_argument("--bits", type=int, default=430)
    p.add_argument("--clock-mhz", type=float, default=100.0)
    p.add_argument("--machines", type=int, default=100)
    p.add_argument("--mips", type=float, default=100.0)
    _common(p)
    p.set_defaults(func_name="shor estimate")

    p = shor.add_parser("qft-demo")
    p.add_argument("--qubits", type=int, default=8)
    p.add_argument("--period", type=int, default=4)
    p.add_argument("--offset", type=int, default=0)
    _common(p, ("csv", "json"))
    p.set_defaults(func_name="shor qft-demo")
    return parser


def _run_reference(args, group: str) -> int:
    from iontrapqc.reference import run_checks

    checks = run_checks(group)
    if args.format == "csv":
        rows = [(c.name, c.value, c.expected, c.tolerance, c.mode, "PASS" if c.passed else "FAIL") for c in checks]
        _write(args, _csv_text(["check", "value", "expected", "tolerance", "mode", "status"], rows, {"group": group}), "csv")
    else:
        doc = {"artifact": "iontrapqc", "version": __version__, "command": args.func_name, "reference_examples": [c.to_dict() for c in checks]}
        _write(args, _json_text(doc), "json")
    return 0 if all(c.passed for c in checks) else EXIT_FAILED_CHECKS


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler, group = HANDLERS[args.func_name]
    try:
        if args.reference_examples:
            return _run_reference(args, group)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = handler(args)
        if isinstance(result, tuple):
            header, rows = result
            _write(args, _csv_text(header, rows, _config(args)), "csv")
        else:
            _write(args, _json_text(_document(args, result, caught)), "json")
        return 0
    except (CliError, ValueError, KeyError, IndexError, RuntimeError, OSError, json.JSONDecodeError) as exc:
        _emit_error(type(exc).__name__, str(exc).strip("'\""))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
