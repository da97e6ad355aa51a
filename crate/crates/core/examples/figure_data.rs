//! Drives the command-line layer in-process to emit the figure 6 data
//! (antennas needed vs eps) into a temporary directory, then prints it.

fn main() {
    let dir = std::env::temp_dir().join("nonhom-figure-data");
    let out = dir.to_string_lossy().into_owned();
    let code = nonhom::cli::run(["nonhom", "figures", "--figure", "6", "--out", &out]);
    if code != 0 {
        std::process::exit(code);
    }
    let csv = std::fs::read_to_string(dir.join("fig6.csv")).expect("figure file");
    print!("{csv}");
}
