"""Command-line front end: reproducible verification runs with reports.

Exit codes: 0 pass, 1 mismatch against the reference values, 2 when parts
were skipped (time budget or --skip), 3 usage error.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from . import cyclo, discal, golden, imgstruct, preimage, specialize, treeauto
from .arith import FactorBudgetError
from .permgrp import BudgetExceededError, TimeBudget
from .report import Report, write_report

EXIT_PASS, EXIT_MISMATCH, EXIT_SKIPPED, EXIT_USAGE = 0, 1, 2, 3


@dataclass
class RunConfig:
    depth: int | None
    budget: float | None
    seed: int
    t0: complex
    fmt: str
    out: Path | None

    def budget_obj(self) -> TimeBudget:
        return TimeBudget(self.budget)

    def echo(self, command: str, default_depth: int | None = None) -> dict:
        return {
            "command": command,
            "depth": self.depth if self.depth is not None else default_depth,
            "budget": self.budget,
            "seed": self.seed,
            "t0": f"{self.t0.real:g},{self.t0.imag:g}",
            "format": self.fmt,
        }

    def depth_or(self, default: int) -> int:
        return self.depth if self.depth is not None else default


def _parse_t0(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise click.UsageError(f"cannot parse basepoint {text!r}; expected 're,im'")


def common_options(f):
    for option in reversed([
        click.option("--depth", type=int, default=None,
                     help="Depth / level limit (command-specific default)."),
        click.option("--budget", type=float, default=None,
                     help="Wall-clock budget in seconds; exceeded parts are skipped."),
        click.option("--seed", type=int, default=0, show_default=True,
                     help="Seed for all randomized checks."),
        click.option("--t0", "t0_text", type=str, default="2,1", show_default=True,
                     help="Complex basepoint for the numeric tree, as 're,im'."),
        click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]),
                     default="text", show_default=True),
        click.option("--out", type=click.Path(path_type=Path), default=None,
                     help="Write the report here (figures are placed alongside)."),
    ]):
        f = option(f)
    return f


def _config(depth, budget, seed, t0_text, fmt, out) -> RunConfig:
    return RunConfig(depth, budget, seed, _parse_t0(t0_text), fmt, out)


def _finish(report: Report, cfg: RunConfig) -> int:
    write_report(report, cfg.fmt, cfg.out)
    return report.exit_code


@click.group()
def cli() -> None:
    """Verification tool for the tree dynamics of the map x -> 1/(x-1)^2."""


# -- individual commands -----------------------------------------------------------


def run_orders(cfg: RunConfig) -> Report:
    n_max = cfg.depth_or(18)
    if n_max > treeauto.MAX_SYMBOL_DEPTH:
        raise click.UsageError(f"order scan supports depth <= {treeauto.MAX_SYMBOL_DEPTH}")
    budget = cfg.budget_obj()
    report = Report("orders", cfg.echo("orders", 18))
    mismatch = 0
    for n in range(1, n_max + 1):
        if budget.exceeded():
            report.skip(f"orders-level-{n}", "budget exhausted")
            continue
        for i in (1, 2, 3):
            measured = treeauto.element_order_exponent(treeauto.generator(i, n))
            predicted = treeauto.predicted_order_exponent(i, n)
            table = golden.GENERATOR_ORDER_EXPONENTS[i][n - 1] if n <= 18 else None
            ok = measured == predicted and (table is None or measured == table)
            mismatch += not ok
            report.rows.append({"n": n, "generator": i, "measured": measured,
                                "predicted": predicted, "match": ok})
    if report.rows:
        report.check("generator-orders", mismatch == 0, golden.GENERATOR_ORDER_CLAIM)
    return report


def run_group_table(cfg: RunConfig, with_n_indices: bool = False) -> Report:
    n_max = cfg.depth_or(9)
    if n_max > 12:
        raise click.UsageError("group orders beyond level 12 are out of scope")
    budget = cfg.budget_obj()
    report = Report("group-table", cfg.echo("group-table", 9))
    table = imgstruct.group_table(n_max, budget=budget, with_n_indices=with_n_indices)
    for row in table.rows:
        report.rows.append(row.to_json())
    for n in table.skipped:
        report.skip(f"group-level-{n}", "budget exhausted")
    if table.rows:
        report.check("order-table", table.ok, golden.GROUP_ORDER_CLAIM)
        report.check("growth-recurrence",
                     all(r.conjecture_delta == 0 for r in table.rows),
                     "measured orders satisfy the doubling recurrence")
        report.check("closed-form",
                     all(r.closed_form_delta == 0 for r in table.rows),
                     "measured orders equal the closed-form prediction")
    return report


def run_kernel3(cfg: RunConfig) -> Report:
    report = Report("kernel3", cfg.echo("kernel3"))
    check = imgstruct.verify_G3_kernel()
    report.check("kernel-order", check.kernel_order == golden.LEVEL3_KERNEL_ORDER,
                 golden.LEVEL3_KERNEL_CLAIM)
    report.check("kernel-equality", check.kernel_equals_group,
                 "group membership and positive parity coincide on all 128 elements")
    report.check("members-positive", check.all_members_positive,
                 "every group element has positive parity")
    a1, a2, a3 = (treeauto.generator(i, 3) for i in (1, 2, 3))
    elements = {
        "a1_squared": a1 * a1,
        "a2_squared": a2 * a2,
        "a3_a1sq_a3inv": a3 * (a1 * a1) * a3.inverse(),
    }
    for name, element in elements.items():
        got = treeauto.to_cycle_string(element.leaf_perm())
        want = "".join("(" + " ".join(map(str, c)) + ")"
                       for c in golden.EXPLICIT_LEVEL3_CYCLES[name])
        report.rows.append({"element": name, "cycles": got, "expected": want})
        report.check(f"cycles-{name}", got == want, golden.EXPLICIT_CYCLES_CLAIM)
    report.check("sigma-negative", imgstruct.sgn3(treeauto.sigma(3)) == -1,
                 "the root swap has negative parity")
    return report


def run_frattini(cfg: RunConfig) -> Report:
    report = Report("frattini", cfg.echo("frattini"))
    check = imgstruct.verify_frattini(cfg.budget_obj())
    report.rows.append(check.to_json())
    report.check("garith-order", check.garith_order_log2 == golden.GARITH5_ORDER_LOG2,
                 "arithmetic group at depth 5 has log2 order 25")
    report.check("index-over-geometric",
                 check.index_over_geometric_log2 == golden.GARITH5_INDEX_OVER_G_LOG2,
                 golden.GARITH5_CLAIM)
    report.check("frattini-index",
                 check.frattini_index_log2 == golden.GARITH5_FRATTINI_INDEX_LOG2,
                 golden.GARITH5_CLAIM)
    report.check("geometric-normal", check.geometric_is_normal,
                 "the geometric group is normal in the arithmetic one")
    report.check("contains-geometric", check.contains_geometric,
                 "the arithmetic group contains the geometric group")
    return report


def run_n_structure(cfg: RunConfig, samples: int = 200) -> Report:
    n_max = min(cfg.depth_or(8), 8)
    budget = cfg.budget_obj()
    report = Report("n-structure", cfg.echo("n-structure", 8))
    for n in range(2, n_max + 1):
        try:
            check = imgstruct.verify_N_structure(n, seed=cfg.seed, samples=samples,
                                                 budget=budget)
        except BudgetExceededError:
            report.skip(f"structure-level-{n}", "budget exhausted")
            continue
        report.rows.append({
            "n": n,
            "n1_index_log2": check.index_log2[1],
            "n2_index_log2": check.index_log2[2],
            "n3_index_log2": check.index_log2[3],
            "ok": check.ok,
        })
        report.check(f"structure-level-{n}", check.ok,
                     check.witness or golden.N_INDEX_CLAIM)
    return report


def run_semirigid(cfg: RunConfig) -> Report:
    report = Report("semirigid", cfg.echo("semirigid", 3))
    for n in (1, 2, 3):
        check = imgstruct.semi_rigidity_bruteforce(n)
        report.rows.append(check.to_json())
        report.check(f"semi-rigidity-{n}", check.ok,
                     check.counterexample or f"{check.triples_checked} triples checked")
    for n in (2, 3):
        report.check(f"section-conjugacy-{n}", imgstruct.conjugate_sections_check(n),
                     "conjugate swap sections have conjugate products")
    report.check("product-identity", imgstruct.product_identity_holds(9),
                 "a1 a2 a3 truncates to the identity at every level up to 9")
    return report


def run_disc(cfg: RunConfig) -> Report:
    n_max = min(cfg.depth_or(5), discal.MAX_DISCRIMINANT_LEVEL)
    report = Report("disc", cfg.echo("disc", 5))
    for n in range(1, n_max + 1):
        g, h = discal.iterate_fraction(n)
        report.rows.append({"kind": "iterate", "n": n,
                            "numerator": " ".join(g.to_json()),
                            "denominator": " ".join(h.to_json())})
        form = discal.discriminant_form(n)
        report.rows.append({"kind": "discriminant", "n": n, "sign": form.sign,
                            "m": form.two_exponent, "a": form.t_exponent,
                            "b": form.one_minus_t_exponent, "form": str(form)})
    report.check("shape", True, golden.DISCRIMINANT_CLAIM)
    lvl1 = discal.discriminant_form(1)
    report.check("level-1", lvl1.to_json() == {"sign": 1, "m": 2, "a": 1, "b": 0},
                 "first discriminant is exactly 4t")
    lvl2 = discal.discriminant_form(2)
    report.check(
        "level-2",
        (lvl2.two_exponent, lvl2.t_exponent, lvl2.one_minus_t_exponent) == (8, 3, 1)
        and lvl2.sign == golden.DISCRIMINANT_LEVEL2_SIGN,
        golden.DISCRIMINANT_CLAIM,
    )
    for n in range(1, discal.MAX_ITERATE + 1):
        lead = discal.leading_data(n)
        report.rows.append({"kind": "leading", "n": n, "leading_g": lead.leading_g,
                            "leading_h": lead.leading_h,
                            "degree_relation": lead.degree_relation, "ok": lead.ok})
        report.check(f"leading-{n}", lead.ok,
                     "leading coefficients and degree pattern follow the recurrences")
        power = discal.resultant_power_check(n)
        report.rows.append({"kind": "two-power", "n": n,
                            "resultant": str(power.resultant_value),
                            "wronskian_leading": power.wronskian_leading,
                            "ok": power.ok})
        report.check(f"two-power-{n}", power.ok, golden.WRONSKIAN_CLAIM)
    report.check("wronskian-base", discal.wronskian(1).leading == golden.D1_VALUE
                 and discal.wronskian(2).leading == golden.D2_VALUE
                 and discal.resultant(*discal.iterate_fraction(1)) == golden.RES_G1_H1,
                 golden.WRONSKIAN_CLAIM)
    for n in range(1, 5):
        ram = discal.ramification_values(n)
        report.rows.append({"kind": "ramification", "n": n,
                            "rational_roots": " ".join(map(str, ram.rational_roots)),
                            "irrational_degree": ram.irrational_degree,
                            "ok": ram.all_two_power_or_zero})
        report.check(f"ramification-{n}", ram.all_two_power_or_zero,
                     "iterate values at rational ramification points are 2-powers or zero")
    return report


def run_zeta(cfg: RunConfig) -> Report:
    depth = min(cfg.depth_or(7), preimage.MAX_DEPTH)
    report = Report("zeta", cfg.echo("zeta", 7))
    try:
        tree = preimage.build_tree(cfg.t0, depth)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    identities = [
        ("child-product", preimage.child_product_residual(tree)),
        ("grandchild-square", preimage.grandchild_square_residual(tree)),
        ("triple-product", preimage.triple_product_residual(tree)),
    ]
    for name, residual in identities:
        report.rows.append({"check": name, "residual": f"{residual:.3e}"})
        report.check(name, residual < preimage.IDENTITY_TOL,
                     f"max relative residual {residual:.3e} below 1e-9")
    for m in (2, 3, 4):
        expr = preimage.zeta_expression(m)
        if expr.max_level() > depth:
            report.skip(f"primitive-root-2^{m}", "tree too shallow")
            continue
        z = preimage.eval_zeta(tree, expr)
        residual = abs(z ** (1 << (m - 1)) + 1)
        report.rows.append({"check": f"primitive-root-2^{m}", "residual": f"{residual:.3e}"})
        report.check(f"primitive-root-2^{m}", residual < preimage.ROOT_TOL,
                     f"root of exact order 2^{m}, residual {residual:.3e}")
    return report


def run_chi(cfg: RunConfig, samples: int = 100) -> Report:
    report = Report("chi", cfg.echo("chi", 7))
    rng = random.Random(cfg.seed)
    budget = cfg.budget_obj()
    tree7 = preimage.build_tree(cfg.t0, 7)
    w1 = treeauto.build_named("w1")
    w2 = treeauto.build_named("w2")
    k1 = preimage.act_numeric(w1, preimage.zeta_expression(3), tree7)
    report.check("w1-action", k1 == golden.W1_ZETA8_EXPONENT,
                 golden.CYCLOTOMIC_ACTION_CLAIM + f" (measured {k1})")
    k2 = preimage.act_numeric(w2.restrict(3), preimage.zeta_expression(2), tree7)
    report.check("w2-action", k2 == golden.W2_ZETA4_EXPONENT,
                 golden.CYCLOTOMIC_ACTION_CLAIM + f" (measured {k2})")
    ka = preimage.act_numeric(treeauto.generator(1, 5), preimage.zeta_expression(3), tree7)
    report.check("a1-fixes-root", ka == 1, "the first generator fixes the 8th root")

    for n in (3, 5, 7):
        expr = preimage.zeta_expression((n + 1) // 2)
        disagreements = 0
        for _ in range(samples):
            flags = np.zeros((1 << n) - 1, dtype=np.uint8)
            lo = (1 << (n - 1)) - 1
            for j in range(lo, flags.size):
                flags[j] = rng.randrange(2)
            w = treeauto.LevelAutomorphism(n, flags)
            criterion = cyclo.kernel_criterion(w)
            k = preimage.act_numeric(w, expr, tree7)
            if criterion != (k == 1):
                disagreements += 1
        report.rows.append({"kind": "parity-agreement", "n": n, "samples": samples,
                            "disagreements": disagreements})
        report.check(f"parity-agreement-{n}", disagreements == 0,
                     "combinatorial criterion matches the numeric action")

    en = cyclo.en_sequence(30)
    report.check("log-order-bookkeeping",
                 en.recurrence_ok and en.increment_pattern_ok
                 and en.values[:12] == [golden.GROUP_ORDER_LOG2[n] for n in range(1, 13)],
                 "closed form, recurrence and increment pattern agree to level 30")

    for n in range(3, min(cfg.depth_or(6), 8) + 1):
        try:
            check = cyclo.u_index_check(n, budget)
        except BudgetExceededError:
            report.skip(f"kernel-index-{n}", "budget exhausted")
            continue
        report.rows.append({"kind": "kernel-index", "n": n,
                            "index_log2": check.index_log2,
                            "expected": check.expected_index_log2,
                            "ok": check.ok})
        report.check(f"kernel-index-{n}", check.ok,
                     "kernel doubling index is 2 at odd levels and 1 at even levels")
    witness_ok = True
    for n in range(1, 10):
        witness = treeauto.parity_witness(n)
        ok = witness.restrict(n - 1).is_identity()
        ok = ok and imgstruct.build_G(n).contains(witness.leaf_perm())
        witness_ok &= ok
    report.check("witness-membership", witness_ok,
                 "parity witnesses lie in the level kernels up to depth 9")
    return report


def run_check_a(cfg: RunConfig, value: str) -> Report:
    report = Report("check-a", {**cfg.echo("check-a"), "a": value})
    try:
        a = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"cannot parse rational {value!r}") from exc
    if a in (0, 1):
        raise click.UsageError("the parameter must avoid 0 and 1")
    verdict = specialize.theorem_verdict(a)
    report.rows.append(verdict.to_json())
    report.check("degree16", True, verdict.note)
    return report


def run_verify_all(cfg: RunConfig, skip: tuple[str, ...]) -> Report:
    slow_skipped = "slow" in skip
    report = Report("verify-all", {**cfg.echo("verify-all"), "skip": sorted(skip)})
    sections: list[tuple[str, Report]] = []

    orders_cfg = RunConfig(18, cfg.budget, cfg.seed, cfg.t0, cfg.fmt, None)
    sections.append(("orders", run_orders(orders_cfg)))

    table_depth = 7 if slow_skipped else 9
    sections.append(("group-table", run_group_table(
        RunConfig(table_depth, cfg.budget, cfg.seed, cfg.t0, cfg.fmt, None))))
    sections.append(("kernel3", run_kernel3(cfg)))
    sections.append(("frattini", run_frattini(cfg)))
    structure_depth = 5 if slow_skipped else 8
    sections.append(("n-structure", run_n_structure(
        RunConfig(structure_depth, cfg.budget, cfg.seed, cfg.t0, cfg.fmt, None),
        samples=50 if slow_skipped else 200)))
    sections.append(("semirigid", run_semirigid(cfg)))
    sections.append(("disc", run_disc(RunConfig(5, cfg.budget, cfg.seed, cfg.t0,
                                                cfg.fmt, None))))
    sections.append(("zeta", run_zeta(RunConfig(7, cfg.budget, cfg.seed, cfg.t0,
                                                cfg.fmt, None))))
    chi_depth = 4 if slow_skipped else 6
    sections.append(("chi", run_chi(RunConfig(chi_depth, cfg.budget, cfg.seed,
                                              cfg.t0, cfg.fmt, None))))

    rng = random.Random(cfg.seed)
    disagreements = 0
    for _ in range(500):
        num = rng.randrange(-10**6, 10**6)
        den = rng.randrange(1, 10**6)
        a = Fraction(num, den)
        if a in (0, 1):
            continue
        if specialize.degree16_condition(a) != specialize.brute_force_degree16(a):
            disagreements += 1
    spec_report = Report("check-a", cfg.echo("check-a"))
    spec_report.check("oracle-agreement", disagreements == 0,
                      "rank decision matches the subset-product oracle on 500 rationals")
    for a, want in ((Fraction(7), True), (Fraction(5), False), (Fraction(2), False)):
        spec_report.check(f"degree16-a={a}", specialize.degree16_condition(a) is want,
                          "reference specialization verdicts")
    sections.append(("specialize", spec_report))

    if slow_skipped:
        report.skip("slow-parts", "deep levels reduced by --skip slow")
    for name, sub in sections:
        report.rows.append({"section": name, "status": sub.status})
        for verdict in sub.verdicts:
            verdict.name = f"{name}/{verdict.name}"
            report.verdicts.append(verdict)
    return report


# -- click wiring -------------------------------------------------------------------


def _command(name: str, runner, extra_options=()):
    def callback(depth, budget, seed, t0_text, fmt, out, **kwargs):
        cfg = _config(depth, budget, seed, t0_text, fmt, out)
        return _finish(runner(cfg, **kwargs), cfg)

    callback.__name__ = name.replace("-", "_")
    cmd = callback
    for option in extra_options:
        cmd = option(cmd)
    cmd = common_options(cmd)
    return cli.command(name=name)(cmd)


_command("orders", run_orders)
_command("group-table", run_group_table, [
    click.option("--n-indices", "with_n_indices", is_flag=True, default=False,
                 help="Also compute the normal-closure indices (levels <= 8)."),
])
_command("kernel3", run_kernel3)
_command("frattini", run_frattini)
_command("n-structure", run_n_structure, [
    click.option("--samples", type=int, default=200, show_default=True),
])
_command("semirigid", run_semirigid)
_command("disc", run_disc)
_command("zeta", run_zeta)
_command("chi", run_chi, [
    click.option("--samples", type=int, default=100, show_default=True),
])
_command("verify-all", run_verify_all, [
    click.option("--skip", multiple=True, type=click.Choice(["slow"]),
                 help="Skip the expensive deep levels."),
])


@cli.command(name="check-a")
@click.argument("value")
@common_options
def check_a_command(value, depth, budget, seed, t0_text, fmt, out):
    cfg = _config(depth, budget, seed, t0_text, fmt, out)
    return _finish(run_check_a(cfg, value), cfg)


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, standalone_mode=False)
        return rv if isinstance(rv, int) else EXIT_PASS
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return EXIT_USAGE
    except FactorBudgetError as exc:
        click.echo(f"budget: {exc}", err=True)
        return EXIT_SKIPPED
    except BudgetExceededError as exc:
        click.echo(f"budget: {exc}", err=True)
        return EXIT_SKIPPED


if __name__ == "__main__":
    sys.exit(main())
