use ltlfsynt_cli::{main_with, run_ltlfrand, Ltlfrand};

fn main() {
    std::process::exit(main_with::<Ltlfrand>(run_ltlfrand));
}
