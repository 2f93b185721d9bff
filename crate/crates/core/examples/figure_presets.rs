//! Writes the CSV for every figure preset into a directory, the same way the
//! `greybound` binary does.
//!
//! ```bash
//! cargo run --example figure_presets -- target/figures
//! ```

use std::path::PathBuf;

use greybound::cli::run_with;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/figures".into()));
    std::fs::create_dir_all(&dir).expect("cannot create output directory");

    let jobs = [
        ("potential", "fig1"),
        ("potential", "fig2"),
        ("bounds", "fig3"),
        ("bounds", "fig4"),
        ("verify", "fig3"),
    ];
    for (command, preset) in jobs {
        let path = dir.join(format!("{preset}_{command}.csv"));
        let args = [
            "greybound",
            command,
            "--preset",
            preset,
            "--out",
            path.to_str().unwrap(),
        ];
        let mut log = Vec::new();
        let code = run_with(args, &mut std::io::stdout(), &mut log);
        print!("{}", String::from_utf8_lossy(&log));
        println!("{command} --preset {preset} -> {} (exit {code})", path.display());
    }
}
