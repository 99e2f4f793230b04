use ltlfsynt_cli::{main_with, run_ltlf2dfa, Ltlf2Dfa};

fn main() {
    std::process::exit(main_with::<Ltlf2Dfa>(run_ltlf2dfa));
}
