from phlandmarks.cli import main


def run_cli(*args):
    return main([str(a) for a in args])


class TestGen:
    def test_writes_dataset_csv(self, tmp_path):
        out = tmp_path / "data.csv"
        assert run_cli("gen", "--dataset", "torus", "--n", 40, "--p", 0.5,
                       "--seed", 3, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# dataset=torus,n=40")
        assert lines[1] == "x0,x1,x2,x3,label"
        assert len(lines) == 42

    def test_missing_out_fails(self, capsys):
        assert run_cli("gen", "--dataset", "torus", "--n", 10) == 2
        assert "error:" in capsys.readouterr().err


class TestSelect:
    def test_random_selection_csv(self, tmp_path):
        out = tmp_path / "sel.csv"
        assert run_cli("select", "--dataset", "sphere_cube", "--n", 60,
                       "--method", "random", "--m", 10, "--seed", 1,
                       "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "rank,point_index,score"
        assert len(lines) == 11

    def test_ph_selection_has_scores(self, tmp_path):
        out = tmp_path / "sel.csv"
        assert run_cli("select", "--dataset", "sphere_cube", "--n", 80,
                       "--method", "ph", "--delta", 0.4, "--m", 5,
                       "--seed", 1, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 6
        assert not lines[1].endswith(",")  # scored landmark rows carry values


class TestSweep:
    def test_sweep_and_raw_companion(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run_cli("sweep", "--dataset", "sphere_cube", "--n", 120,
                       "--p", 0.6, "--method", "random",
                       "--densities", "0.1,0.5", "--reps", 3,
                       "--seed", 7, "--out", out) == 0
        assert len(out.read_text().splitlines()) == 3
        raw = tmp_path / "sweep.raw.csv"
        assert len(raw.read_text().splitlines()) == 7

    def test_byte_identical_across_runs_and_threads(self, tmp_path):
        outputs = []
        for name, threads in (("a.csv", 1), ("b.csv", 1), ("c.csv", 4)):
            out = tmp_path / name
            assert run_cli("sweep", "--dataset", "sphere_cube", "--n", 150,
                           "--method", "ph", "--delta", 0.3,
                           "--densities", "0.1,0.3", "--reps", 2,
                           "--seed", 11, "--threads", threads,
                           "--out", out) == 0
            outputs.append(out.read_bytes() + (tmp_path / name.replace(".csv", ".raw.csv")).read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]


class TestDeltaSweep:
    def test_counts_csv(self, tmp_path):
        out = tmp_path / "ds.csv"
        assert run_cli("delta-sweep", "--dataset", "sphere_cube", "--n", 150,
                       "--deltas", "0.1,0.2,0.4", "--seed", 2,
                       "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "delta,super_outliers"
        counts = [int(line.split(",")[1]) for line in lines[1:]]
        assert counts == sorted(counts, reverse=True)


class TestHist:
    def test_histogram_csv(self, tmp_path):
        out = tmp_path / "hist.csv"
        assert run_cli("hist", "--dataset", "sphere_cube", "--n", 150,
                       "--delta", 0.3, "--mode", "all", "--seed", 5,
                       "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "row_kind,bin_left,bin_right,signal_count,noise_count"
        assert lines[-1].startswith("super_outliers")


class TestBarcode:
    def test_barcode_csv_with_inf(self, tmp_path):
        out = tmp_path / "bars.csv"
        assert run_cli("barcode", "--dataset", "sphere_cube", "--n", 100,
                       "--method", "maxmin", "--take", 12, "--eps-max", 0.2,
                       "--dims", "0,1", "--seed", 4, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "dim,birth,death"
        assert any(line.endswith(",inf") for line in lines[1:])

    def test_cap_refusal(self, tmp_path, capsys):
        out = tmp_path / "bars.csv"
        code = run_cli("barcode", "--dataset", "sphere_cube", "--n", 900,
                       "--method", "random", "--take", 500, "--eps-max", 0.1,
                       "--seed", 4, "--out", out)
        assert code == 2
        assert "allow_large" in capsys.readouterr().err


class TestConfigFile:
    def test_config_supplies_defaults(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "dataset = torus\nn = 30\np = 0.5\nseed = 9\n# comment\n"
        )
        out = tmp_path / "data.csv"
        assert run_cli("gen", "--config", cfg, "--out", out) == 0
        assert out.read_text().splitlines()[0].startswith("# dataset=torus,n=30")

    def test_flags_override_config(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("dataset = torus\nn = 30\nseed = 9\n")
        out = tmp_path / "data.csv"
        assert run_cli("gen", "--config", cfg, "--dataset", "klein",
                       "--out", out) == 0
        assert out.read_text().splitlines()[0].startswith("# dataset=klein")

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("wibble = 3\n")
        assert run_cli("gen", "--config", cfg, "--out", tmp_path / "x.csv") == 2
        assert "wibble" in capsys.readouterr().err

    def test_config_can_set_out(self, tmp_path):
        out = tmp_path / "data.csv"
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"dataset = sphere_line\nn = 25\nout = {out}\n")
        assert run_cli("gen", "--config", cfg) == 0
        assert out.exists()


class TestSelectorDefaults:
    def test_dim1_mode_pairs_with_descending(self, tmp_path):
        # dim1 without explicit direction must not warn (standard pairing)
        import warnings
        out = tmp_path / "sel.csv"
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert run_cli("select", "--dataset", "sphere_cube", "--n", 60,
                           "--method", "ph", "--mode", "dim1", "--delta", 0.5,
                           "--m", 5, "--seed", 1, "--out", out) == 0
