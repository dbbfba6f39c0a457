#!/usr/bin/env python3
"""Build the leosplit_py extension, load it, and exercise the API surface.

Run from anywhere:  python3 python/smoke_test.py
"""
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def build_extension() -> Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "leosplit-py"],
        cwd=ROOT,
        check=True,
    )
    release = ROOT / "target" / "release"
    for candidate in ("libleosplit_py.so", "libleosplit_py.dylib", "leosplit_py.dll"):
        built = release / candidate
        if built.exists():
            staging = Path(tempfile.mkdtemp(prefix="leosplit_py_"))
            suffix = ".pyd" if candidate.endswith(".dll") else ".so"
            shutil.copy2(built, staging / f"leosplit_py{suffix}")
            return staging
    raise SystemExit("extension library not found under target/release")


sys.path.insert(0, str(build_extension()))
import leosplit_py as lp  # noqa: E402


def close(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol


# --- the worked three-layer instance ---------------------------------------
sat = lp.SatelliteProfile(
    beta=0.02,
    zeta=100.0,
    p_max=10.0,
    p_idle=1.0,
    p_leak=0.5,
    p_off=2.0,
    rate_down=100.0,
    t_cyc=28800.0,
    t_con=360.0,
)
cloud = lp.CloudSegment(gamma=0.001, gamma_max=0.001, rate_gs_dc=1000.0)
request = lp.InferenceRequest(data_size=1000.0, alphas=[0.8, 0.4, 0.1])
scenario = lp.Scenario(sat, cloud, request, mu=0.5, lam=0.5)
scenario.validate()

best = lp.solve_ilpb(scenario)
assert best.method == "ILPB"
assert best.split_index == 0, best
assert close(best.z, 0.0, 1e-12)
assert close(best.latency.total, 10.1)
assert close(best.energy.total, 16.0)
assert best.nodes_explored <= 2 * 3 + 1

ars = lp.baseline_ars(scenario)
assert close(ars.latency.total, 26.0) and close(ars.energy.total, 169.0)
arg = lp.baseline_arg(scenario)
assert close(arg.latency.total, 10.1) and close(arg.energy.total, 16.0)

split1 = lp.OffloadDecision.from_split(1, 3)
assert split1.assignments() == [True, False, False]
assert split1.is_feasible() and split1.transmission_layer() == 2
lat1 = lp.total_latency(split1, scenario)
en1 = lp.total_energy(split1, scenario)
assert close(lat1.total, 20.9) and close(en1.total, 112.0)
z1, norm_e1, norm_t1 = lp.objective_value(split1, scenario)
assert close(z1, 0.5 * (96.0 / 153.0) + 0.5 * (10.8 / 15.9))

zigzag = lp.OffloadDecision([True, False, True])
assert not zigzag.is_feasible()
violations = lp.check_constraints(zigzag, scenario)
assert any("monotonicity" in v for v in violations), violations

# invalid scenarios raise ValueError
try:
    lp.Scenario(sat, cloud, lp.InferenceRequest(1000.0, []), mu=0.5, lam=0.5).validate()
except ValueError as err:
    assert "K must be >= 1" in str(err)
else:
    raise AssertionError("empty request must fail validation")

# --- seeded generator, oracle equivalence, dominance ------------------------
assert lp.geometric_alphas(0.5, 3) == [0.5, 0.25, 0.125]
assert repr(lp.sample_scenario(layers=8, seed=1)) == repr(lp.sample_scenario(layers=8, seed=1))

for seed in range(30):
    drawn = lp.sample_scenario(layers=1 + seed % 12, seed=seed, mu=0.3, lam=0.7)
    candidate = lp.solve_ilpb(drawn)
    oracle = lp.solve_bruteforce(drawn)
    assert candidate.decision == oracle.decision, (seed, candidate, oracle)
    assert abs(candidate.z - oracle.z) <= 1e-12
    assert candidate.z <= lp.baseline_arg(drawn).z
    assert candidate.z <= lp.baseline_ars(drawn).z

print(f"leosplit_py {lp.__version__}: smoke test passed")
