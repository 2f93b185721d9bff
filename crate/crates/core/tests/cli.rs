use greybound::cli::{run_with, EXIT_BOUND_VIOLATION, EXIT_SUCCESS, EXIT_VALIDATION};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Output {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let code = run_with(
        std::iter::once("greybound").chain(args.iter().copied()),
        &mut stdout,
        &mut stderr,
    );
    Output {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

/// Splits CSV output into the header comment, column names and rows.
fn parse(csv: &str) -> (String, Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().to_string();
    assert!(header.starts_with('#'), "missing header comment: {header}");
    let columns = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, columns, rows)
}

fn column(columns: &[String], name: &str) -> usize {
    columns
        .iter()
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

fn float(cell: &str) -> f64 {
    cell.parse().unwrap_or_else(|_| panic!("not a number: {cell:?}"))
}

#[test]
fn every_preset_runs() {
    for preset in ["fig1", "fig2", "fig3", "fig4"] {
        for command in ["potential", "bounds", "tortoise"] {
            let out = run(&[command, "--preset", preset]);
            assert_eq!(out.code, EXIT_SUCCESS, "{command} {preset}: {}", out.stderr);
            let (header, _, rows) = parse(&out.stdout);
            assert!(header.contains(&format!("command={command}")));
            assert!(!rows.is_empty());
        }
    }
}

#[test]
fn uncharged_potential_columns_coincide() {
    let out = run(&["potential", "--preset", "fig1"]);
    let (header, columns, rows) = parse(&out.stdout);
    assert!(header.contains("q=0"));
    let (rn, schw) = (column(&columns, "V_rn"), column(&columns, "V_schwarzschild"));
    for row in &rows {
        assert!((float(&row[rn]) - float(&row[schw])).abs() <= 1e-14);
    }
}

#[test]
fn charged_potential_vanishes_at_first_row() {
    let out = run(&["potential", "--preset", "fig2"]);
    let (_, columns, rows) = parse(&out.stdout);
    let v = column(&columns, "V_rn");
    let peak = rows.iter().map(|r| float(&r[v])).fold(0.0, f64::max);
    assert!(float(&rows[0][v]) < 1e-5 * peak);
    assert!(out
        .stderr
        .contains("charged peak is higher than the uncharged one"));
}

#[test]
fn empty_grid_is_rejected_without_creating_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let path_str = path.to_str().unwrap();
    let out = run(&[
        "potential",
        "--preset",
        "fig2",
        "--r-grid",
        "4:20:0",
        "--out",
        path_str,
    ]);
    assert_eq!(out.code, EXIT_VALIDATION);
    assert!(!path.exists());
    let out = run(&["bounds", "--omega", "0.1:2:0", "--out", path_str]);
    assert_eq!(out.code, EXIT_VALIDATION);
    assert!(!path.exists());
}

#[test]
fn bounds_row_at_unit_frequency() {
    let out = run(&["bounds", "--preset", "fig3", "--omega", "0.5,1,1.5"]);
    assert_eq!(out.code, EXIT_SUCCESS);
    let (_, columns, rows) = parse(&out.stdout);
    assert_eq!(
        columns,
        [
            "omega",
            "T_bound_rn",
            "T_bound_schw",
            "R_bound_rn",
            "R_bound_schw"
        ]
    );
    let row = rows.iter().find(|r| r[0] == "1").unwrap();
    // sech²(1/3) and sech²(5/16)
    assert!((float(&row[1]) - 0.8966295596049144).abs() < 1e-12);
    assert!((float(&row[2]) - 0.9083668197676816).abs() < 1e-12);
}

#[test]
fn bounds_rows_are_ordered_and_complementary() {
    let out = run(&["bounds", "--preset", "fig4"]);
    let (_, _, rows) = parse(&out.stdout);
    assert_eq!(rows.len(), 50);
    for row in &rows {
        let [_, t_rn, t_schw, r_rn, r_schw] = [0, 1, 2, 3, 4].map(|i| float(&row[i]));
        assert!(t_rn <= t_schw);
        assert!(r_rn >= r_schw);
        assert!((t_rn + r_rn - 1.0).abs() <= 1e-15);
        assert!((t_schw + r_schw - 1.0).abs() <= 1e-15);
    }
}

#[test]
fn verify_preset_passes_with_nonnegative_margins() {
    let out = run(&["verify", "--preset", "fig3"]);
    assert_eq!(out.code, EXIT_SUCCESS, "{}", out.stderr);
    let (_, columns, rows) = parse(&out.stdout);
    assert_eq!(
        columns,
        [
            "omega",
            "T_num",
            "R_num",
            "T_bound",
            "R_bound",
            "unitarity_defect",
            "bound_margin"
        ]
    );
    let margin = column(&columns, "bound_margin");
    assert!(rows.iter().all(|r| float(&r[margin]) >= 0.0));
    assert!(out.stderr.contains("min bound_margin"));
    assert!(out.stderr.contains("max unitarity_defect"));
}

#[test]
fn verify_free_potential_is_transparent() {
    let out = run(&["verify", "--free-potential", "--omega", "0.2:2:10"]);
    assert_eq!(out.code, EXIT_SUCCESS, "{}", out.stderr);
    let (_, columns, rows) = parse(&out.stdout);
    let (t, margin) = (column(&columns, "T_num"), column(&columns, "bound_margin"));
    for row in &rows {
        assert!((float(&row[t]) - 1.0).abs() < 1e-9);
        assert!(float(&row[margin]).abs() < 1e-9);
    }
}

#[test]
fn verify_flags_a_corrupted_bound() {
    let out = run(&[
        "verify",
        "--preset",
        "fig3",
        "--omega",
        "0.5:1.5:5",
        "--bound-offset",
        "0.5",
    ]);
    assert_eq!(out.code, EXIT_BOUND_VIOLATION);
    assert!(out.stderr.contains("BOUND VIOLATION"));
}

#[test]
fn tortoise_branches() {
    let out = run(&["tortoise", "--preset", "fig2"]);
    let (_, columns, rows) = parse(&out.stdout);
    assert_eq!(columns, ["r", "r_star", "branch", "residual"]);
    assert!(rows.iter().all(|r| r[2] == "sub-extremal" && float(&r[3]) < 1e-6));

    let out = run(&["tortoise", "--g", "1", "--m", "1", "--q", "1"]);
    assert_eq!(out.code, EXIT_SUCCESS, "{}", out.stderr);
    let (_, _, rows) = parse(&out.stdout);
    assert!(rows.iter().all(|r| r[2] == "extremal" && float(&r[3]) < 1e-6));

    let out = run(&["tortoise", "--g", "1", "--m", "1", "--q", "1.5"]);
    assert_eq!(out.code, EXIT_SUCCESS);
    assert!(out.stderr.contains("warning"));
    let (_, _, rows) = parse(&out.stdout);
    assert!(rows.iter().all(|r| r[2] == "super-extremal"));
}

#[test]
fn non_black_holes_are_rejected_by_physics_commands() {
    for command in ["potential", "bounds", "verify"] {
        let out = run(&[command, "--g", "1", "--m", "1", "--q", "1.5"]);
        assert_eq!(out.code, EXIT_VALIDATION, "{command}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["bounds", "--omega", "-1,1"]).code, EXIT_VALIDATION);
    assert_eq!(run(&["bounds", "--rel-tol", "0"]).code, EXIT_VALIDATION);
    assert_eq!(run(&["nonsense"]).code, EXIT_VALIDATION);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--preset", "fig3", "--omega", "0.3:1.8:8"];
    let first = run(&args).stdout;
    let second = run(&args).stdout;
    assert!(!first.is_empty());
    assert_eq!(first, second);
}

#[test]
fn flags_override_config_file_and_write_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    let out_path = dir.path().join("bounds.csv");
    std::fs::write(&config, "# sweep settings\npreset = fig3\nl = 2\nomega = 0.5,1\n").unwrap();
    let out = run(&[
        "bounds",
        "--config",
        config.to_str().unwrap(),
        "--l",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_SUCCESS, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let (header, _, rows) = parse(&std::fs::read_to_string(&out_path).unwrap());
    assert!(header.contains("l=3"));
    assert!(header.contains("q=1"));
    assert_eq!(rows.len(), 2);

    std::fs::write(&config, "colour = blue\n").unwrap();
    let out = run(&["bounds", "--config", config.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_VALIDATION);
}
