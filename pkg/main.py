#!/usr/bin/env python3
"""Multiqubit Witness Toolkit - Main CLI Runner."""
import sys,os,time,math,argparse,subprocess,shutil,logging,json
from pathlib import Path
from pydantic import ValidationError
from scripts.lib_config import RunConfig, load_config, load_env
from scripts.lib_decompose import SCHEMES, decompose_witness
from scripts.lib_errors import (NotDetectedError, ParameterError, ResourceError, SchemeError, SeparableStateError,
                                StateFileError, WitnessError)
from scripts.lib_io import dumps, load_psmq, load_state, load_witness, witness_to_json, write_json
from scripts.lib_pipeline import optimize_b_tolerance, run_pipeline, smq_form
from scripts.lib_smq import classify_smq
from scripts.lib_states import (PureState, all_bipartitions, is_genuinely_entangled, is_ppt,
                                max_schmidt_coefficient_sq, schmidt_rank)
from scripts.lib_symmetric import PsmqVerdict, is_permutation_symmetric, msmq_examples, psmq_classify
from scripts.lib_transform import factorize, find_product_cut
from scripts.lib_witness import (dicke24_witness, min_over_product_states, projector_witness, w_n_witness, w_prime_witness,
                                 white_noise_tolerance)

ROOT = Path(__file__).parent
PIPELINE = {
    "witness":   ["1_check_w_witness.py"],
    "decompose": ["2_check_decompositions.py"],
    "smq":       ["3_check_smq_inequality.py"],
    "tolerance": ["4_check_tolerances.py"],
    "symmetric": ["5_check_symmetric.py"],
    "transform": ["6_check_exponent_injectivity.py"],
}
EXIT_OK, EXIT_ERROR, EXIT_SEPARABLE, EXIT_NOT_DETECTED, EXIT_USAGE = 0, 1, 2, 3, 64
SIM = ROOT/"simulate"
# (argv, expected exit code); input_states/ and data/ paths resolve under simulate/
DEMO = [
    (["classify", "input_states/ghz3.json"], EXIT_OK),
    (["build", "input_states/ghz3.json", "--out", "data/ghz3_witness.json"], EXIT_OK),
    (["decompose", "data/ghz3_witness.json", "--out", "data/ghz3_settings.json"], EXIT_OK),
    (["tolerance", "data/ghz3_witness.json", "input_states/ghz3.json", "--optimize-b"], EXIT_OK),
    (["build", "input_states/psi4.json", "--out", "data/psi4_witness.json"], EXIT_OK),
    (["build", "--kind", "w_n", "--n", "3", "--out", "data/w3_witness.json"], EXIT_OK),
    (["decompose", "data/w3_witness.json", "--scheme", "w3opt"], EXIT_OK),
    (["tolerance", "data/w3_witness.json", "input_states/w3.json"], EXIT_OK),
    (["symmetric", "input_states/plus3_psmq.json", "--examples"], EXIT_OK),
    (["build", "input_states/bell_and_zero.json"], EXIT_SEPARABLE),
]
KINDS = ["pipeline", "projector", "w_n", "w_prime", "dicke24"]
USAGE_ERRORS = (StateFileError, ParameterError, SchemeError, ValidationError, ResourceError)
log = logging.getLogger("witness")

class UsageError(Exception): pass

def b_value(text: str) -> float | None:
    """--b: "auto" or a positive float."""
    if text == "auto": return None
    try: b = float(text)
    except ValueError: raise argparse.ArgumentTypeError(f"expected auto or a positive number, got {text!r}") from None
    if not (b > 0 and math.isfinite(b)): raise argparse.ArgumentTypeError(f"b must be positive and finite, got {text!r}")
    return b

class Parser(argparse.ArgumentParser):
    def error(self, message): raise UsageError(message)

def emit(args, report: dict, lines: list[str]):
    if args.json: sys.stdout.write(dumps(report))
    else: print("\n".join(lines))

def _require_separable_check(state: PureState, cfg: RunConfig):
    if (cut := find_product_cut(state.normalized(), cfg.tol_rank)) is not None:
        raise SeparableStateError(cut.subset, *factorize(state.normalized(), cut))

# --- Commands ---
def cmd_classify(args, cfg: RunConfig) -> int:
    s = load_state(args.state, cfg.n_cap).normalized(); n = s.n_qubits
    ranks = {c.label: schmidt_rank(s, c, cfg.tol_rank) for c in all_bipartitions(n)} if n >= 2 else {}
    ge = is_genuinely_entangled(s, cfg.tol_rank, cfg.n_cap) if n >= 2 else False
    sm = classify_smq(s, cfg.eps_zero)
    smq = {"accepted": True, "coefficients": sm.to_json()} if sm else {"accepted": False, "reason": sm.reason}
    rep = {"n": n, "genuinely_entangled": ge, "bipartition_ranks": ranks, "smq": smq}
    if n >= 2: rep["max_schmidt_coefficient_sq"] = max_schmidt_coefficient_sq(s, cfg.n_cap)
    emit(args, rep, [f"📋 State: N={n}",
                     f"{'✅' if ge else '❌'} Genuinely entangled: {ge}",
                     f"{'✅' if sm else '❌'} SMQ form: {'accepted' if sm else sm.reason}"]
         + [f"   {k}: rank {v}" for k, v in ranks.items()])
    return EXIT_OK

def _named_n(args, state: PureState | None) -> int:
    n = args.n or (state.n_qubits if state else None)
    if n is None: raise ParameterError(f"--kind {args.kind} needs --n or a state file")
    return n

def cmd_build(args, cfg: RunConfig) -> int:
    state = load_state(args.state, cfg.n_cap) if args.state else None
    b = args.b; info: dict = {"kind": args.kind}
    if args.kind in ("pipeline", "projector") and state is None: raise ParameterError(f"--kind {args.kind} needs a state file")
    if args.kind == "pipeline":
        res = run_pipeline(state, seed=cfg.sub_seed("build"), b=b, max_tries=cfg.max_tries, eps=cfg.eps_zero)
        wit = res.witness; info |= res.summary()
    elif args.kind == "projector":
        _require_separable_check(state, cfg); wit = projector_witness(state)
    elif args.kind == "w_n": wit = w_n_witness(_named_n(args, state))
    elif args.kind == "w_prime":
        n = _named_n(args, state); b = 1/math.sqrt(n*n - n) if b is None else b
        wit = w_prime_witness(n, b); info["b"] = b
    else: wit = dicke24_witness()
    if state is not None:
        t = wit.expectation(state); info["expectation"] = t
        if t >= 0: raise NotDetectedError(f"{args.kind} witness does not detect the input", t)
    info |= {"n": wit.n_qubits, "provenance": wit.provenance.value, "trace": wit.trace}
    oracle = min_over_product_states(wit, cfg.restarts, cfg.sub_seed("oracle"), cfg.sweeps); info["product_oracle"] = oracle.to_json()
    if oracle.violated: log.warning("see-saw found a product state with Tr(W sigma) = %.3e", oracle.value)
    if args.out: write_json(witness_to_json(wit), args.out); info["out"] = str(args.out)
    rep = info if args.out or not args.json else {**info, "witness": witness_to_json(wit)}
    lines = [f"✅ Built {wit.provenance.value} witness (N={wit.n_qubits})"]
    if "expectation" in info: lines.append(f"📋 Tr(W rho) = {info['expectation']:.10g}")
    lines.append(f"{'⚠️ ' if oracle.violated else '✅'} Product-state minimum ~ {oracle.value:.3e} ({oracle.restarts} restarts)")
    if "b" in info: lines.append(f"📋 b = {info['b']:.10g}, b_upper = {info.get('b_upper', 'inf')}")
    if args.out: lines.append(f"📋 Wrote {args.out}")
    emit(args, rep, lines); return EXIT_OK

def cmd_decompose(args, cfg: RunConfig) -> int:
    wit = load_witness(args.witness, cfg.n_cap)
    dec, res = decompose_witness(wit, args.scheme)
    if res > cfg.tol_reconstruct: raise WitnessError(f"reconstruction residual {res:.3e} exceeds {cfg.tol_reconstruct:.1e}")
    rep = {**dec.to_json(), "residual": res}
    if args.out: write_json(rep, args.out)
    summary = {"scheme": args.scheme, "declared_count": dec.declared_count, "residual": res,
               "realizable": all(s.realizable for s in dec.settings)}
    emit(args, rep if not args.out else {**summary, "out": str(args.out)},
         [f"✅ {args.scheme}: {dec.declared_count} settings, residual {res:.3e}"]
         + ([] if summary["realizable"] else ["⚠️  conjugated by a non-unitary chain: not experimentally realizable"])
         + ([f"📋 Wrote {args.out}"] if args.out else []))
    return EXIT_OK

def cmd_tolerance(args, cfg: RunConfig) -> int:
    wit = load_witness(args.witness, cfg.n_cap); s = load_state(args.state, cfg.n_cap).normalized()
    if args.optimize_b:
        if wit.smq_chain is None: raise SchemeError(f"{wit.provenance.value} witness carries no SMQ chain to optimize b over")
        chain = wit.smq_chain; b, rpt = optimize_b_tolerance(smq_form(s, chain, cfg.eps_zero), s, chain)
        rep = {**rpt.to_json(), "b_star": b}
    else: rep = white_noise_tolerance(wit, s).to_json()
    emit(args, rep, [f"✅ p_max = {rep['p_max']:.10g}"] + ([f"📋 b* = {rep['b_star']:.10g}"] if "b_star" in rep else []))
    return EXIT_OK

def _msmq_report() -> dict:
    out = {}
    for name, rho in zip(("rho1", "rho2", "rho3"), msmq_examples()):
        out[name] = {"symmetric": is_permutation_symmetric(rho), "min_eigenvalue": float(rho.eigenvalues.min()),
                     "ppt": {c.label: is_ppt(rho, c) for c in all_bipartitions(rho.n_qubits)}}
    return out

def cmd_symmetric(args, cfg: RunConfig) -> int:
    if not args.psmq and not args.examples: raise UsageError("give a PSMQ file or --examples")
    rep, lines = {}, []
    if args.psmq:
        c = load_psmq(args.psmq); v = psmq_classify(c)
        rep = v.to_json() | {"n": c.n_qubits}
        if v.ratio is not None: rep["ratio"] = [v.ratio.real, v.ratio.imag]
        lines.append(f"{'✅' if v.verdict is PsmqVerdict.fully_entangled else '📋'} {v.verdict.value}")
        if v.ratio is not None: lines.append(f"📋 b/a = {v.ratio:.10g}")
    if args.examples:
        rep["msmq_examples"] = ex = _msmq_report()
        lines += [f"📋 {k}: symmetric={r['symmetric']} PPT everywhere={all(r['ppt'].values())}" for k, r in ex.items()]
    emit(args, rep, lines); return EXIT_OK

def run_step(script):
    print(f"\n▶️  Running: {script}"); t0 = time.time()
    try:
        env = os.environ.copy(); env["PYTHONPATH"] = str(ROOT) + os.pathsep + env.get("PYTHONPATH","")
        r = subprocess.run([sys.executable, str(ROOT/"scripts"/script)], check=False, env=env)
        print(f"{'✅ Pass' if r.returncode==0 else '❌ Fail'} ({time.time()-t0:.2f}s)")
        return r.returncode == 0
    except Exception as e: print(f"❌ Error: {e}"); return False

def cmd_selftest(args, cfg: RunConfig) -> int:
    steps = [s for k,v in PIPELINE.items() if not args.phase or k==args.phase for s in v]
    if args.step: steps = [s for s in steps if args.step in s]
    if args.plan: [print(f" {i}. {s}") for i,s in enumerate(steps,1)]; return EXIT_OK
    t0 = time.time()
    for s in steps:
        if not run_step(s): print("\n⛔ Stopped."); return EXIT_ERROR
    print(f"\n🎉 Success ({time.time()-t0:.1f}s)"); return EXIT_OK

def cmd_demo(args, cfg: RunConfig) -> int:
    """Every subcommand on the simulate/ inputs; outputs go to simulate/data."""
    print("🔧 Configuring Demo (Isolated)..."); d_data = SIM/"data"
    if d_data.exists(): print(f"🧹 Clearing {d_data.relative_to(ROOT)}"); shutil.rmtree(d_data)
    d_data.mkdir(parents=True)
    fix = lambda a: str(SIM/a) if a.startswith(("input_states/", "data/")) else a
    t0, fails = time.time(), 0
    for argv, want in DEMO:
        full = [fix(a) for a in argv] + ["--config", str(SIM/"config"/"run_config.json")]
        print(f"\n▶️  Running: {' '.join(argv)}")
        got = main(full); ok = got == want; fails += not ok
        print(f"{'✅ Pass' if ok else '❌ Fail'} (exit {got}, expected {want})")
    if fails: print(f"\n⛔ {fails} demo step(s) failed."); return EXIT_ERROR
    print(f"\n🎉 Demo complete ({time.time()-t0:.1f}s): outputs in {d_data.relative_to(ROOT)}"); return EXIT_OK

# --- Parser ---
def build_parser() -> Parser:
    g = Parser(add_help=False)
    g.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="RunConfig JSON file")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Master seed")
    g.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="Machine output on stdout")
    g.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help="Debug logging on stderr")
    p = Parser(prog="main.py", description="Entanglement witnesses for multiqubit pure states", parents=[g])
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", parents=[g], help="Genuine entanglement and SMQ form"); c.add_argument("state", type=Path)
    c.set_defaults(func=cmd_classify)
    b = sub.add_parser("build", parents=[g], help="Build a witness")
    b.add_argument("state", type=Path, nargs="?"); b.add_argument("--kind", choices=KINDS, default="pipeline")
    b.add_argument("--b", type=b_value, default=None, help="auto or a positive value"); b.add_argument("--n", type=int)
    b.add_argument("--out", type=Path); b.set_defaults(func=cmd_build)
    d = sub.add_parser("decompose", parents=[g], help="Local measurement settings")
    d.add_argument("witness", type=Path); d.add_argument("--scheme", choices=[*SCHEMES, "dicke24"], default="universal")
    d.add_argument("--out", type=Path); d.set_defaults(func=cmd_decompose)
    t = sub.add_parser("tolerance", parents=[g], help="White-noise tolerance")
    t.add_argument("witness", type=Path); t.add_argument("state", type=Path)
    t.add_argument("--optimize-b", action="store_true"); t.set_defaults(func=cmd_tolerance)
    s = sub.add_parser("symmetric", parents=[g], help="Permutation-symmetric states")
    s.add_argument("psmq", type=Path, nargs="?"); s.add_argument("--examples", action="store_true", help="Report the mixed examples")
    s.set_defaults(func=cmd_symmetric)
    st = sub.add_parser("selftest", parents=[g], help="Run numbered reproduction steps")
    st.add_argument("--plan", action="store_true", help="Show plan"); st.add_argument("--phase", choices=PIPELINE.keys())
    st.add_argument("--step", help="Run only specific step"); st.set_defaults(func=cmd_selftest)
    sub.add_parser("demo", parents=[g], help="Run every command on the simulate/ inputs").set_defaults(func=cmd_demo)
    return p

def _separable_report(args, e: SeparableStateError):
    rep = {"error": "separable", "separating_qubits": list(e.qubits),
           "factor": [[float(z.real), float(z.imag)] for z in e.factor], "rest": [[float(z.real), float(z.imag)] for z in e.rest]}
    emit(args, rep, [f"⛔ Separable input: qubits {list(e.qubits)} factor out"])

def main(argv=None) -> int:
    load_env()
    try: args = build_parser().parse_args(argv)
    except UsageError as e: print(f"❌ {e}", file=sys.stderr); return EXIT_USAGE
    for k in ("config", "seed"): setattr(args, k, getattr(args, k, None))
    for k in ("json", "verbose"): setattr(args, k, getattr(args, k, False))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, seed=args.seed)
        return args.func(args, cfg)
    except SeparableStateError as e: log.error("%s", e); _separable_report(args, e); return EXIT_SEPARABLE
    except NotDetectedError as e: log.error("%s", e); print(f"❌ {e}", file=sys.stderr); return EXIT_NOT_DETECTED
    except (UsageError, *USAGE_ERRORS) as e: print(f"❌ {e}", file=sys.stderr); return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as e: print(f"❌ config: {e}", file=sys.stderr); return EXIT_USAGE
    except WitnessError as e: print(f"❌ {e}", file=sys.stderr); return EXIT_ERROR

if __name__=="__main__": sys.exit(main())
