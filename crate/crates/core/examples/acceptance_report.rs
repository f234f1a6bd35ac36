//! Runs the whole acceptance suite and prints one line per criterion.

fn main() {
    for report in ising_fidelity::acceptance::run_all() {
        println!("{}", report.summary_line());
        for note in &report.notes {
            println!("    {note}");
        }
    }
}
