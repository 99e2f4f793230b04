use ltlfsynt_cli::{main_with, run_ltlfsynt, Ltlfsynt};

fn main() {
    std::process::exit(main_with::<Ltlfsynt>(run_ltlfsynt));
}
