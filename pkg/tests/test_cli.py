import csv
import io
import json
import subprocess
import sys

import pytest

from scldpc import __version__
from scldpc.cli import float_grid, int_range, main
from scldpc.construct import construct
from scldpc.core import read_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def header(text):
    return dict(line[2:].split("=", 1) for line in text.splitlines() if line.startswith("# "))


class TestHelpers:
    def test_int_range(self):
        assert int_range("4") == [4]
        assert int_range("2:5") == [2, 3, 4, 5]
        assert int_range("3,7") == [3, 7]

    def test_float_grid(self):
        assert float_grid("1:0.5:3") == [1.0, 1.5, 2.0, 2.5, 3.0]
        assert float_grid("2.5") == [2.5]
        assert float_grid("1,4") == [1.0, 4.0]


class TestProcess:
    def test_help_exits_zero(self):
        res = subprocess.run([sys.executable, "-m", "scldpc.cli", "--help"], capture_output=True, text=True)
        assert res.returncode == 0 and "simulate" in res.stdout

    def test_subcommand_help(self):
        res = subprocess.run([sys.executable, "-m", "scldpc.cli", "search", "--help"], capture_output=True, text=True)
        assert res.returncode == 0 and "--girth" in res.stdout

    def test_unknown_flag(self):
        res = subprocess.run([sys.executable, "-m", "scldpc.cli", "girth", "--bogus"], capture_output=True, text=True)
        assert res.returncode == 2 and "usage" in res.stderr


class TestGirth:
    def test_corpus_pc1(self, capsys):
        code, out, _ = run(capsys, "girth", "-i", "corpus:pc1")
        data = json.loads(out)
        assert code == 0 and data["girth"] == 8
        assert data["profile"]["m_h"] == 37 and data["profile"]["v_s"] == 646
        assert data["meta"]["version"] == __version__
        assert data["spectrum"]["4"] == 0 and data["spectrum"]["6"] == 0

    def test_eq27_from_file(self, capsys, tmp_path):
        path = tmp_path / "m.mtx"
        run(capsys, "construct", "--family", "mixed", "--a", "6", "--k", "7", "-o", str(path))
        code, out, _ = run(capsys, "girth", "-i", str(path), "--spectrum-max", "0")
        assert json.loads(out)["girth"] == 6 and "spectrum" not in json.loads(out)

    def test_modulus(self, capsys):
        code, out, _ = run(capsys, "girth", "-i", "corpus:qc_g8_a4_p9", "--modulus", "9")
        assert json.loads(out)["girth"] == 8

    def test_empty_file(self, capsys, tmp_path):
        path = tmp_path / "empty.mtx"
        path.write_text("")
        code, _, err = run(capsys, "girth", "-i", str(path))
        assert code == 4 and "line 1, column 1" in err

    def test_bad_entry_position(self, capsys, tmp_path):
        path = tmp_path / "bad.mtx"
        path.write_text("1 2\n0 zz\n")
        code, _, err = run(capsys, "girth", "-i", str(path))
        assert code == 4 and "line 2, column 3" in err

    def test_missing_file(self, capsys):
        assert run(capsys, "girth", "-i", "/nonexistent/x.mtx")[0] == 4
        assert run(capsys, "girth", "-i", "corpus:nope")[0] == 4

    def test_unwritable_output(self, capsys):
        assert run(capsys, "girth", "-i", "corpus:pc3", "-o", "/nonexistent/dir/out.json")[0] == 4


class TestSpectrum:
    def test_json_map(self, capsys):
        code, out, _ = run(capsys, "spectrum", "-i", "corpus:h2_free_g8", "--max", "8")
        spec = json.loads(out)["spectrum"]
        assert set(spec) == {"4", "6", "8"} and spec["4"] == spec["6"] == 0


class TestBounds:
    def test_single(self, capsys):
        code, out, _ = run(capsys, "bounds", "--family", "type1", "--a", "7", "--c", "3", "--w", "3", "--girth", "8")
        res = json.loads(out)["bound"]
        assert code == 0 and (res["quantity"], res["value"]) == ("m_h", 6)

    def test_irregular_profile(self, capsys):
        code, out, _ = run(capsys, "bounds", "--family", "typez", "--a", "2", "--c", "2", "--w", "2,3", "--girth", "6")
        assert json.loads(out)["bound"]["value"] == 4

    def test_no_bound(self, capsys):
        code, out, _ = run(capsys, "bounds", "--family", "type1", "--a", "5", "--c", "3", "--w", "3", "--girth", "12")
        assert code == 3 and "no bound in catalog" in json.loads(out)["error"]

    def test_missing_arguments(self, capsys):
        assert run(capsys, "bounds", "--a", "5")[0] == 2
        assert run(capsys, "bounds", "tables")[0] == 2

    def test_table(self, capsys):
        code, out, _ = run(capsys, "bounds", "table", "--a", "3:31")
        rows = read_csv(out)
        assert code == 0 and len(rows) == 29
        assert [r["type1-w3-g8"] for r in rows[1:5]] == ["2", "3", "4", "6"]
        assert header(out)["command"] == "bounds"


class TestConstruct:
    @pytest.mark.parametrize("family, a, k", [("type1", 9, None), ("type2", 12, None), ("type3", 9, None),
                                              ("mixed", 6, 7)])
    def test_round_trip(self, capsys, tmp_path, family, a, k):
        path = tmp_path / "c.mtx"
        argv = ["construct", "--family", family, "--a", str(a), "-o", str(path)]
        if k is not None:
            argv += ["--k", str(k)]
        assert run(capsys, *argv)[0] == 0
        assert read_matrix(path) == construct(family, a, k)
        assert header(path.read_text())["family"] == json.dumps(family)

    def test_bad_request(self, capsys):
        assert run(capsys, "construct", "--family", "type3", "--a", "7")[0] == 2


class TestSearch:
    def test_example(self, capsys, tmp_path):
        path = tmp_path / "w.mtx"
        code, out, _ = run(capsys, "search", "--repr", "symbolic", "--a", "5", "--c", "3", "--w", "3", "--girth", "8",
                           "--mode", "exhaustive", "--seed", "7", "-o", str(path))
        data = json.loads(out)
        assert code == 0
        assert data["outcome"]["status"] == "found" and data["outcome"]["value"] == 5
        assert {"nodes", "wall_ms", "status"} <= data["outcome"].keys()
        assert data["meta"]["seed"] == 7
        assert read_matrix(path).m_h == 5

    def test_binary(self, capsys):
        code, out, _ = run(capsys, "search", "--repr", "binary", "--a", "4", "--c", "1", "--w", "2", "--girth", "8")
        assert json.loads(out)["outcome"]["value"] == 8

    def test_infeasible_exit(self, capsys):
        code, out, _ = run(capsys, "search", "--a", "5", "--c", "3", "--w", "3", "--girth", "8", "--hi", "4")
        assert code == 3 and json.loads(out)["outcome"]["status"] == "exhausted_no_solution"

    def test_budget_exit(self, capsys):
        code, out, _ = run(capsys, "search", "--a", "7", "--c", "3", "--w", "3", "--girth", "8", "--node-limit", "10")
        assert code == 3 and json.loads(out)["outcome"]["status"] == "budget_exceeded"

    def test_heuristic(self, capsys):
        code, out, _ = run(capsys, "search", "--a", "17", "--c", "3", "--w", "3", "--girth", "6",
                           "--mode", "heuristic", "--seed", "3")
        assert code == 0 and json.loads(out)["outcome"]["value"] <= 70

    def test_json_to_file(self, capsys, tmp_path):
        path = tmp_path / "o.json"
        run(capsys, "search", "--a", "4", "--c", "3", "--w", "3", "--girth", "8", "--json", str(path))
        assert json.loads(path.read_text())["outcome"]["value"] == 3


class TestSweep:
    def test_w2_bound_is_tight(self, capsys):
        code, out, _ = run(capsys, "sweep", "--repr", "binary", "--a", "2:10", "--c", "2", "--w", "2", "--girth", "6")
        rows = read_csv(out)
        assert code == 0 and len(rows) == 9
        assert all(r["gap"] == "0" for r in rows)

    def test_w3c3_g8_minima(self, capsys):
        code, out, _ = run(capsys, "sweep", "--a", "4:7", "--c", "3", "--w", "3", "--girth", "8")
        rows = read_csv(out)
        assert [r["searched_min"] for r in rows] == ["3", "5", "6", "8"]
        assert [r["bound"] for r in rows] == ["2", "3", "4", "6"]

    def test_c1_lemma(self, capsys):
        code, out, _ = run(capsys, "sweep", "--repr", "binary", "--a", "3:6", "--c", "1", "--w", "2", "--girth", "8")
        assert [int(r["searched_min"]) for r in read_csv(out)] == [6, 8, 10, 12]

    def test_budget_rows(self, capsys):
        code, out, _ = run(capsys, "sweep", "--a", "6:7", "--c", "3", "--w", "3", "--girth", "8", "--node-limit", "5")
        rows = read_csv(out)
        assert code == 3 and all(r["status"] == "budget_exceeded" for r in rows)

    def test_columns(self, capsys):
        _, out, _ = run(capsys, "sweep", "--a", "4", "--c", "3", "--w", "3", "--girth", "8")
        assert list(read_csv(out)[0])[:5] == ["a", "bound", "searched_min", "gap", "status"]


class TestSpace:
    def test_example(self, capsys):
        code, out, _ = run(capsys, "space", "--repr", "binary", "--a", "4", "--c", "2", "--w", "2", "--Lh", "6")
        space = json.loads(out)["space"]
        assert code == 0 and len(space["stages"]) == 4 and space["final"] == space["stages"][-1]

    def test_invalid(self, capsys):
        assert run(capsys, "space", "--repr", "binary", "--a", "4", "--c", "2")[0] == 2


class TestMinMax:
    def test_archived(self, capsys, tmp_path):
        path = tmp_path / "out.mtx"
        code, out, _ = run(capsys, "minmax", "-i", "corpus:qc_g8_a6_p18", "--modulus", "18", "-m", str(path))
        res = json.loads(out)["result"]
        assert code == 0 and res["m_h"] == 7 and res["complete"]
        assert read_matrix(path).m_h == 7

    def test_byte_deterministic(self, capsys):
        argv = ["minmax", "-i", "corpus:qc_g8_a5_p13", "--modulus", "13"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    def test_heuristic(self, capsys):
        code, out, _ = run(capsys, "minmax", "-i", "corpus:qc_g8_a5_p13", "--modulus", "13",
                           "--budget", "heuristic", "--restarts", "3")
        assert code == 0 and json.loads(out)["result"]["m_h"] <= 12

    def test_small_modulus(self, capsys):
        assert run(capsys, "minmax", "-i", "corpus:qc_g8_a5_p13", "--modulus", "5")[0] == 2

    def test_polynomial_input(self, capsys):
        assert run(capsys, "minmax", "-i", "corpus:type2_even_k4", "--modulus", "9")[0] == 2


class TestSimulate:
    def test_csv(self, capsys, tmp_path):
        path = tmp_path / "ber.csv"
        code, _, _ = run(capsys, "simulate", "-i", "corpus:pc3", "--ebno", "2:1:3", "--blocks", "16", "--window", "13",
                         "--iters", "20", "--max-frames", "2", "--seed", "1", "-o", str(path))
        text = path.read_text()
        rows = read_csv(text)
        assert code == 0 and len(rows) == 2
        assert list(rows[0]) == ["ebno_db", "bits", "errors", "ber", "frames", "wall_ms"]
        meta = header(text)
        assert meta["window"] == "13" and meta["window_bits"] == "156" and meta["seed"] == "1"
        assert int(rows[0]["bits"]) == int(rows[0]["frames"]) * 16 * 12

    def test_full_bp(self, capsys):
        code, out, _ = run(capsys, "simulate", "-i", "corpus:h2_free_g6", "--ebno", "3", "--blocks", "8",
                           "--iters", "10", "--max-frames", "2")
        assert code == 0 and header(out)["window"] == "null"

    def test_window_too_small(self, capsys):
        code, _, err = run(capsys, "simulate", "-i", "corpus:pc3", "--ebno", "2", "--window", "5")
        assert code == 2 and "window below decoding horizon" in err

    def test_bad_grid(self, capsys):
        assert run(capsys, "simulate", "-i", "corpus:pc3", "--ebno", "1:x:2")[0] == 2


class TestConfig:
    def test_defaults_from_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# search setup\nrepr = symbolic\na = 4\nc = 3\nw = 3\ngirth = 8\n")
        code, out, _ = run(capsys, "--config", str(cfg), "search")
        assert code == 0 and json.loads(out)["outcome"]["value"] == 3

    def test_flags_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("a = 4\nc = 3\nw = 3\ngirth = 8\n")
        code, out, _ = run(capsys, "--config", str(cfg), "search", "--a", "5")
        assert json.loads(out)["outcome"]["value"] == 5

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 1\n")
        assert run(capsys, "--config", str(cfg), "girth", "-i", "corpus:pc3")[0] == 2

    def test_malformed_line(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("just words\n")
        assert run(capsys, "--config", str(cfg), "girth", "-i", "corpus:pc3")[0] == 2

    def test_missing_config(self, capsys):
        assert run(capsys, "--config", "/nonexistent.cfg", "girth", "-i", "corpus:pc3")[0] == 4

    @pytest.mark.parametrize("argv", [
        ["minmax", "-i", "corpus:qc_g8_a4_p9", "--modulus", "9"],
        ["sweep", "--repr", "binary", "--a", "2:5", "--c", "2", "--w", "2", "--girth", "6"],
        ["bounds", "table", "--a", "3:8"],
        ["space", "--repr", "symbolic", "--a", "3", "--c", "2", "--mh", "2"],
        ["construct", "--family", "type2", "--a", "10"],
        ["girth", "-i", "corpus:pc3"],
    ])
    def test_replay_is_byte_identical(self, capsys, tmp_path, argv):
        first = tmp_path / "first.out"
        second = tmp_path / "second.out"
        assert main(argv + ["-o", str(first)]) in (0, 3)
        assert main(["--config", str(first), argv[0], "-o", str(second)]) in (0, 3)
        assert first.read_bytes() == second.read_bytes()

    def test_search_replay_differs_only_in_timing(self, capsys, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        main(["search", "--a", "5", "--c", "3", "--w", "3", "--girth", "8", "--seed", "7", "--json", str(first)])
        main(["--config", str(first), "search", "--json", str(second)])
        a, b = json.loads(first.read_text()), json.loads(second.read_text())
        a["outcome"].pop("wall_ms"), b["outcome"].pop("wall_ms")
        assert a == b

    def test_simulate_replay(self, capsys, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "-i", "corpus:pc3", "--ebno", "2,3", "--blocks", "14", "--window", "13", "--iters", "10",
              "--max-frames", "2", "-o", str(first)])
        main(["--config", str(first), "simulate", "-o", str(second)])
        strip = lambda t: [r[:-1] for r in csv.reader(io.StringIO(t)) if r and not r[0].startswith("#")]
        assert strip(first.read_text()) == strip(second.read_text())
