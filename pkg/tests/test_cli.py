"""Command-line surface: formats, exit codes, determinism, figures."""

import json

from monotree import cli, golden


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_orders_pass(capsys):
    code, out = run(["orders", "--depth", "3"], capsys)
    assert code == 0
    assert "generator-orders" in out


def test_orders_depth_zero_is_empty_pass(capsys):
    code, out = run(["orders", "--depth", "0"], capsys)
    assert code == 0
    assert "status: pass" in out


def test_orders_mismatch_exit_code(capsys, monkeypatch):
    broken = dict(golden.GENERATOR_ORDER_EXPONENTS)
    broken[1] = (9,) + broken[1][1:]
    monkeypatch.setattr(golden, "GENERATOR_ORDER_EXPONENTS", broken)
    code, _ = run(["orders", "--depth", "2"], capsys)
    assert code == 1


def test_group_table_json(capsys):
    code, out = run(["group-table", "--depth", "4", "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert [r["g_order_log2"] for r in data["rows"]] == [1, 3, 6, 12]
    assert data["status"] == "pass"


def test_group_table_budget_zero_skips(capsys):
    code, out = run(["group-table", "--depth", "4", "--budget", "0"], capsys)
    assert code == 2
    assert "budget exhausted" in out


def test_json_reports_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert cli.main(["group-table", "--depth", "3", "--format", "json",
                         "--out", str(p)]) == 0
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_figures_written_alongside_output(tmp_path, capsys):
    out = tmp_path / "orders.csv"
    assert cli.main(["orders", "--depth", "3", "--format", "csv",
                     "--out", str(out)]) == 0
    capsys.readouterr()
    assert out.exists()
    assert (tmp_path / "orders.png").exists()
    assert out.read_text().startswith("n,generator,measured,predicted,match")


def test_zeta_csv(capsys):
    code, out = run(["zeta", "--format", "csv"], capsys)
    assert code == 0
    assert "child-product" in out
    assert "primitive-root-2^4" in out


def test_zeta_shallow_tree_skips_deep_roots(capsys):
    code, out = run(["zeta", "--depth", "5"], capsys)
    assert code == 2
    assert "primitive-root-2^3" in out
    assert "tree too shallow" in out


def test_zeta_rejects_bad_basepoint(capsys):
    code, _ = run(["zeta", "--t0", "1,0"], capsys)
    assert code == 3
    code, _ = run(["zeta", "--t0", "nonsense"], capsys)
    assert code == 3


def test_kernel3(capsys):
    code, out = run(["kernel3"], capsys)
    assert code == 0
    assert "(2 6)(4 8)" in out


def test_semirigid(capsys):
    code, out = run(["semirigid"], capsys)
    assert code == 0
    assert "product-identity" in out


def test_disc(capsys):
    code, out = run(["disc", "--depth", "3"], capsys)
    assert code == 0
    assert "level-2" in out


def test_check_a(capsys):
    code, out = run(["check-a", "7", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["rows"][0]["degree16"] is True
    code, out = run(["check-a", "5"], capsys)
    assert code == 0
    assert "no conclusion" in out


def test_check_a_usage_errors(capsys):
    assert cli.main(["check-a", "zzz"]) == 3
    assert cli.main(["check-a", "1"]) == 3
    capsys.readouterr()


def test_unknown_command_is_usage_error(capsys):
    assert cli.main(["no-such-thing"]) == 3
    capsys.readouterr()


def test_seed_changes_keep_verdicts(capsys):
    codes = set()
    for seed in ("0", "12345"):
        code, out = run(["n-structure", "--depth", "4", "--seed", seed,
                         "--samples", "40"], capsys)
        codes.add(code)
        assert "status: pass" in out
    assert codes == {0}


def test_chi_small(capsys):
    code, out = run(["chi", "--depth", "3", "--samples", "20"], capsys)
    assert code == 0
    assert "w1-action" in out and "parity-agreement-5" in out
