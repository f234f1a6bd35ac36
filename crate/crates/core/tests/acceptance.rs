//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use ising_fidelity::acceptance::run_all;

fn main() {
    let reports = run_all();
    for r in &reports {
        println!("{}", r.summary_line());
        for note in &r.notes {
            println!("    {note}");
        }
    }
    let failed: Vec<u32> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!(
        "\nacceptance: {} passed, {} failed {:?}",
        reports.len() - failed.len(),
        failed.len(),
        failed
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
