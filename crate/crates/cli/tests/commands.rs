use std::process::{Command, Output};

const MUX: &str = "G((i0 -> (o1 <-> i1)) & (!i0 -> (o1 <-> i2)))";
const REC: &str = "(G F o2) <-> (F i0)";

fn run(bin: &str, args: &[&str]) -> Output {
    Command::new(bin).args(args).env_remove("LTLFSYNT_SEED").output().unwrap()
}

fn synt(args: &[&str]) -> Output {
    run(env!("CARGO_BIN_EXE_ltlfsynt"), args)
}

fn dfa(args: &[&str]) -> Output {
    run(env!("CARGO_BIN_EXE_ltlf2dfa"), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_owned()
}

#[test]
fn multiplexer_verdicts() {
    let base = [MUX, "--ins", "i0,i1,i2", "--outs", "o1"];
    let o = synt(&base);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "REALIZABLE");
    let o = synt(&[&base[..], &["--semantics", "moore"]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "UNREALIZABLE");
}

#[test]
fn conjunction_needs_no_translation() {
    let f = format!("({MUX}) & ({REC})");
    let o = synt(&[&f, "--ins", "i0,i1,i2", "--outs", "o1,o2", "--no-decompose", "--no-preprocess", "--stats"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("REALIZABLE"));
    assert!(out.lines().any(|l| l == "states_translated=0"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("early_exit=")), "{out}");
}

#[test]
fn toggles_do_not_change_verdicts() {
    let f = format!("({MUX}) & ({REC}) & G(i0 -> X[!] o2)");
    let mut verdicts = Vec::new();
    for extra in [
        &[][..],
        &["--mode", "full"],
        &["--no-preprocess"],
        &["--no-decompose"],
        &["--no-onestep"],
        &["--no-rewrites"],
        &["--no-early-exit", "--threads", "1"],
    ] {
        for sem in ["mealy", "moore"] {
            let args = [&[f.as_str(), "--ins", "i0,i1,i2", "--outs", "o1,o2", "--semantics", sem], extra].concat();
            verdicts.push((sem, first_line(&synt(&args))));
        }
    }
    for (sem, v) in &verdicts {
        let reference = &verdicts.iter().find(|(s, _)| s == sem).unwrap().1;
        assert_eq!(v, reference);
    }
}

#[test]
fn trivial_specifications() {
    let o = synt(&["ff"]);
    assert_eq!(stdout(&o), "UNREALIZABLE\n");
    let o = synt(&["tt", "--strategy"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("REALIZABLE"));
    assert!(out.contains("-> accept"), "{out}");
}

#[test]
fn strategies_are_printed_for_realizable_specifications() {
    let o = synt(&[MUX, "--ins", "i0,i1,i2", "--outs", "o1", "--strategy"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("REALIZABLE"));
    assert!(out.contains("inputs: i0 i1 i2"), "{out}");
    assert!(out.contains("i0 & i1 & !i2 / o1"), "{out}");
    let o = synt(&[MUX, "--ins", "i0,i1,i2", "--outs", "o1", "--strategy", "--semantics", "moore"]);
    assert_eq!(stdout(&o), "UNREALIZABLE\n");
}

#[test]
fn exit_statuses() {
    assert_eq!(synt(&["G(a ->", "--ins", "a"]).status.code(), Some(2));
    assert_eq!(synt(&["G(a -> b)", "--ins", "a"]).status.code(), Some(2));
    assert_eq!(synt(&["G(a -> b)", "--ins", "a,b", "--outs", "b"]).status.code(), Some(2));
    assert_eq!(synt(&["a", "--semantics", "both"]).status.code(), Some(2));
    let budget = synt(&[
        "X[!] X[!] X[!] o",
        "--ins",
        "i",
        "--outs",
        "o",
        "--no-onestep",
        "--no-early-exit",
        "--no-preprocess",
        "--max-states",
        "1",
    ]);
    assert_eq!(budget.status.code(), Some(3));
    assert!(budget.stdout.is_empty());
    assert_eq!(dfa(&["F(a & X[!] G b)", "--max-states", "1"]).status.code(), Some(3));
}

#[test]
fn translation_outputs() {
    let o = dfa(&["tt", "--dot", "-"]);
    let out = stdout(&o);
    assert!(out.starts_with("states=1\n"), "{out}");
    assert!(out.contains("digraph"));
    let f = format!("({MUX}) & ({REC})");
    let o = dfa(&[&f, "--ins", "i0,i1,i2", "--outs", "o1,o2", "--no-rewrites"]);
    assert_eq!(first_line(&o), "states=5");
    let o = dfa(&[&f, "--ins", "i0,i1,i2", "--outs", "o1,o2", "--no-rewrites", "--merge"]);
    assert_eq!(first_line(&o), "states=3");
    let o = dfa(&[&f, "--ins", "i0,i1,i2", "--outs", "o1,o2"]);
    assert_eq!(first_line(&o), "states=3");
}

#[test]
fn text_dumps_reload() {
    let dir = std::env::temp_dir().join(format!("ltlf2dfa-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("aut.txt");
    let o = dfa(&["a U (b & X !a)", "--text", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let (ctx, aut) = ltlfsynt::mtdfa::Mtdfa::from_text(&text, Default::default()).unwrap();
    assert_eq!(aut.to_text(&ctx), text);
    assert_eq!(first_line(&o), format!("states={}", aut.num_states()));
    let formula_file = dir.join("spec.ltlf");
    std::fs::write(&formula_file, "G(i -> X o)\n").unwrap();
    let o = synt(&["--file", formula_file.to_str().unwrap(), "--infer-partition"]);
    assert_eq!(stdout(&o), "REALIZABLE\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn random_formulas_are_reproducible() {
    let bin = env!("CARGO_BIN_EXE_ltlfrand");
    let a = run(bin, &["--seed", "5", "-n", "20", "--atoms", "p,q"]);
    let b = run(bin, &["--seed", "5", "-n", "20", "--atoms", "p,q"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 20);
    let c = Command::new(bin).args(["-n", "20", "--atoms", "p,q"]).env("LTLFSYNT_SEED", "5").output().unwrap();
    assert_eq!(c.stdout, a.stdout);
    for line in stdout(&a).lines() {
        ltlfsynt::ltlf::parse(line).unwrap();
    }
}
