//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::Rng;

use ltlfsynt::game::{
    realizability, solve_offline, GameSolver, Mode, Player, SolveOptions,
};
use ltlfsynt::ltlf::{parse, Assignment, Evaluator, Formula, Partition, Semantics, Vocabulary};
use ltlfsynt::mtbdd::{BoolOp, Mtbdd, OpCache, Payload, TerminalAlgebra};
use ltlfsynt::mtdfa::{Context, Mtdfa, Options};
use ltlfsynt::oracle::{
    explicit_realizable, formulas, random_arena, random_diagram, random_formulas, rng, seed_from_env,
    words, ArenaEvent,
};
use ltlfsynt::preprocess::{solve_decomposed, PipelineOptions};
use ltlfsynt::Result;

const MUX: &str = "G((i0 -> (o1 <-> i1)) & (!i0 -> (o1 <-> i2)))";
const REC: &str = "(G F o2) <-> (F i0)";

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn p(text: &str) -> Formula {
    parse(text).unwrap()
}

fn running_example() -> (Formula, Partition) {
    (
        p(&format!("({MUX}) & ({REC})")),
        Partition::new(["i0", "i1", "i2"], ["o1", "o2"]),
    )
}

fn criterion_1() -> Outcome {
    let (f, part) = running_example();
    let vocab = part.vocabulary(Semantics::Mealy).map_err(|e| e.to_string())?;
    let off = Options {
        rewrites: false,
        ..Options::default()
    };
    let mut ctx = lift(Context::new(vocab.clone(), off))?;
    let aut = lift(Mtdfa::translate(&mut ctx, f))?;
    ensure(aut.num_states() == 5, || format!("{} states without rewrites", aut.num_states()))?;
    let psi1 = MUX;
    let expected = [
        format!("({psi1}) & ((G F o2) <-> F i0)"),
        format!("({psi1}) & ((F o2 & G F o2) <-> F i0)"),
        "ff".to_owned(),
        format!("({psi1}) & G F o2"),
        format!("({psi1}) & G F o2 & F o2"),
    ];
    let mut canon = ltlfsynt::ltlf::Canonicalizer::new(false);
    for text in &expected {
        let want = canon.canonical(p(text));
        let found = (0..aut.num_states())
            .filter_map(|q| aut.state_formula(&ctx, q))
            .any(|g| canon.equivalent(g, want));
        ensure(found, || format!("no state for `{text}`"))?;
    }
    let merged = lift(aut.merge_identical_states(&mut ctx))?;
    ensure(merged.num_states() == 3, || format!("{} states after merging", merged.num_states()))?;
    let mut ctx = lift(Context::new(vocab, Options::default()))?;
    let aut = lift(Mtdfa::translate(&mut ctx, f))?;
    ensure(aut.num_states() == 3, || format!("{} states with rewrites", aut.num_states()))?;
    Ok("5 states without rewrites, 3 with rewrites or merging".into())
}

fn criterion_2() -> Outcome {
    let (both, part) = running_example();
    let cases = [
        (p(MUX), Partition::new(["i0", "i1", "i2"], ["o1"]), Semantics::Mealy, true),
        (p(MUX), Partition::new(["i0", "i1", "i2"], ["o1"]), Semantics::Moore, false),
        (p(REC), Partition::new(["i0"], ["o2"]), Semantics::Mealy, true),
        (p(REC), Partition::new(["i0"], ["o2"]), Semantics::Moore, true),
        (both, part.clone(), Semantics::Mealy, true),
    ];
    for (f, part, sem, expected) in cases {
        let r = lift(realizability(f, &part, sem, &SolveOptions::default()))?;
        ensure(r.is_realizable() == expected, || format!("{f} {sem:?}: {}", r.status))?;
    }
    let r = lift(realizability(both, &part, Semantics::Mealy, &SolveOptions::default()))?;
    ensure(r.stats.states_translated == 0 && r.stats.one_step_realizable >= 1, || {
        format!("conjunction translated {} states", r.stats.states_translated)
    })?;
    Ok("5 golden verdicts, conjunction settled by the one-step check".into())
}

fn check_language(f: Formula, vocab: &Vocabulary, ws: &[Vec<Assignment>], opts: Options) -> std::result::Result<(), String> {
    let mut ctx = lift(Context::new(vocab.clone(), opts))?;
    let aut = lift(Mtdfa::translate(&mut ctx, f))?;
    let ev = lift(Evaluator::new(f, vocab))?;
    for w in ws {
        let got = lift(aut.accepts(&ctx, w))?;
        let want = lift(ev.eval(w, 0))?;
        ensure(got == want, || format!("{f} on a word of length {}: {got} vs {want}", w.len()))?;
    }
    Ok(())
}

fn exhaustive_corpus() -> Vec<Formula> {
    formulas(&["a", "b"], 7)
}

fn random_corpus() -> Vec<Formula> {
    random_formulas(seed_from_env(3), &["a", "b", "c", "d"], 12, 500)
}

fn criterion_3(exhaustive: &[Formula], random: &[Formula]) -> Outcome {
    let v2 = lift(Vocabulary::from_names(["a", "b"]))?;
    let w2 = words(2, 4);
    for &f in exhaustive {
        check_language(f, &v2, &w2, Options::default())?;
    }
    let v4 = lift(Vocabulary::from_names(["a", "b", "c", "d"]))?;
    let w4 = words(4, 4);
    for &f in random {
        check_language(f, &v4, &w4, Options::default())?;
        let off = Options {
            rewrites: false,
            ..Options::default()
        };
        check_language(f, &v4, &w4, off)?;
    }
    Ok(format!(
        "{} exhaustive and {} random formulas agree on every word of length <= 4",
        exhaustive.len(),
        random.len()
    ))
}

fn game_corpus() -> Vec<Formula> {
    random_formulas(seed_from_env(4), &["i0", "i1", "o0", "o1"], 10, 500)
}

fn game_partition() -> Partition {
    Partition::new(["i0", "i1"], ["o0", "o1"])
}

fn criterion_4(corpus: &[Formula]) -> Outcome {
    let part = game_partition();
    let mut realizable = 0;
    for &f in corpus {
        for sem in [Semantics::Mealy, Semantics::Moore] {
            let oracle = lift(explicit_realizable(f, &part, sem))?;
            let bfs = SolveOptions::default();
            let full = SolveOptions {
                mode: Mode::Full,
                ..SolveOptions::default()
            };
            let plain = SolveOptions {
                one_step: false,
                early_exit: false,
                ..SolveOptions::default()
            };
            for opts in [bfs, plain, full] {
                let r = lift(realizability(f, &part, sem, &opts))?;
                ensure(r.is_realizable() == oracle, || {
                    format!("{f} {sem:?} {:?}: {} but the oracle says {oracle}", opts.mode, r.status)
                })?;
            }
            realizable += oracle as usize;
        }
    }
    Ok(format!("{} verdicts agree ({realizable} realizable)", 2 * corpus.len()))
}

fn criterion_5() -> Outcome {
    let mut r = rng(seed_from_env(5));
    let mut vertices = 0;
    for round in 0..1000 {
        let (arena, events) = random_arena(&mut r, 200);
        vertices += arena.len();
        let mut g = GameSolver::new();
        for e in events {
            match e {
                ArenaEvent::Vertex(v, owner) => lift(g.new_vertex(v, owner))?,
                ArenaEvent::Edge(s, d) => lift(g.new_edge(s, d))?,
                ArenaEvent::Freeze(v) => lift(g.freeze_vertex(v))?,
                ArenaEvent::Target(v) => lift(g.set_winner(v, Player::Output))?,
            }
        }
        let offline = solve_offline(&arena);
        for v in 0..arena.len() {
            let inc = g.winner(v) == Some(Player::Output);
            ensure(inc == offline.output_wins(v), || {
                format!("arena {round}, vertex {v}: incremental {inc}")
            })?;
        }
    }
    Ok(format!("1000 arenas, {vertices} vertices"))
}

/// Terminal algebra whose Boolean leaves act as constants, and which mixes
/// tags otherwise.
struct Mixing;

fn mix(op: BoolOp, a: Payload, b: Payload) -> Payload {
    let (t, f) = (Payload::Bool(true), Payload::Bool(false));
    let bit = |p: Payload| match p {
        Payload::Bool(x) => x,
        Payload::Tagged(t) => t.accepting(),
    };
    let index = |p: Payload| match p {
        Payload::Bool(x) => x as u32,
        Payload::Tagged(t) => t.index() + 2,
    };
    match (op, a, b) {
        (_, Payload::Bool(x), Payload::Bool(y)) => Payload::Bool(op.eval(x, y)),
        (BoolOp::And, x, y) if x == f || y == f => f,
        (BoolOp::And, x, y) if x == t => y,
        (BoolOp::And, x, y) if y == t => x,
        (BoolOp::Or, x, y) if x == t || y == t => t,
        (BoolOp::Or, x, y) if x == f => y,
        (BoolOp::Or, x, y) if y == f => x,
        (BoolOp::Xor, x, y) if x == f => y,
        (BoolOp::Xor, x, y) if y == f => x,
        (BoolOp::Iff, x, y) if x == t => y,
        (BoolOp::Iff, x, y) if y == t => x,
        (BoolOp::Implies, x, y) if x == f || y == t => t,
        (BoolOp::Implies, x, y) if x == t => y,
        _ => Payload::tagged(
            (index(a) * 7 + index(b) * 3 + op.tag()) % 5,
            op.eval(bit(a), bit(b)),
        ),
    }
}

impl TerminalAlgebra for Mixing {
    fn combine(&mut self, op: BoolOp, a: Payload, b: Payload) -> Result<Payload> {
        Ok(mix(op, a, b))
    }

    fn negate(&mut self, a: Payload) -> Result<Payload> {
        Ok(match a {
            Payload::Bool(x) => Payload::Bool(!x),
            Payload::Tagged(t) => Payload::tagged((t.index() + 1) % 5, !t.accepting()),
        })
    }
}

fn criterion_6() -> Outcome {
    const OPS: [BoolOp; 5] = [BoolOp::And, BoolOp::Or, BoolOp::Xor, BoolOp::Iff, BoolOp::Implies];
    let mut r = rng(seed_from_env(6));
    let mut t = Mtbdd::new();
    let mut points = 0u64;
    for round in 0..10_000 {
        if round % 500 == 0 {
            t = Mtbdd::new();
        }
        let vars = r.gen_range(1..=6u32);
        let tags = if r.gen_bool(0.3) { 0 } else { 4 };
        let m1 = random_diagram(&mut t, &mut r, 0, vars, tags);
        let m2 = random_diagram(&mut t, &mut r, 0, vars, tags);
        let op = OPS[r.gen_range(0..OPS.len())];
        let mut cache = OpCache::lossless();
        let plain = lift(t.apply2(m1, m2, op.tag(), &mut cache, &mut |a, b| Ok(mix(op, a, b))))?;
        let mut cache = OpCache::lossless();
        let short = lift(t.apply2_shortcut(m1, m2, op, &mut cache, &mut Mixing))?;
        let mut cache = OpCache::lossless();
        let neg = lift(t.negate(m1, &mut cache, &mut Mixing))?;
        let mut cache = OpCache::lossless();
        let back = lift(t.negate(neg, &mut cache, &mut Mixing))?;
        ensure(plain == short, || format!("round {round}: shortcut result differs"))?;
        for m in [m1, m2, plain, neg, back] {
            t.check_invariants(m).map_err(|e| format!("round {round}: {e}"))?;
        }
        for bits in 0..1u64 << vars {
            let w = Assignment::from_bits(bits, vars as usize);
            let (a, b) = (t.eval_assignment(m1, &w), t.eval_assignment(m2, &w));
            ensure(t.eval_assignment(plain, &w) == mix(op, a, b), || {
                format!("round {round}: apply2 wrong at {bits:b}")
            })?;
            ensure(t.eval_assignment(neg, &w) == Mixing.negate(a).unwrap(), || {
                format!("round {round}: apply1 wrong at {bits:b}")
            })?;
        }
        if tags == 0 {
            // Double negation of a Boolean function is the same node.
            ensure(back == m1, || format!("round {round}: double negation is a new node"))?;
        }
        points += 1 << vars;
    }
    Ok(format!("10000 instances, {points} assignments checked"))
}

fn criterion_7() -> Outcome {
    let atoms = ["a", "b", "c"];
    let fs = random_formulas(seed_from_env(7), &atoms, 9, 400);
    let vocab = lift(Vocabulary::from_names(atoms))?;
    for (k, pair) in fs.chunks(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        let mut ctx = lift(Context::new(vocab.clone(), Options::default()))?;
        let ta = lift(Mtdfa::translate(&mut ctx, a))?;
        let tb = lift(Mtdfa::translate(&mut ctx, b))?;
        for (op, joined) in [(BoolOp::And, Formula::and2(a, b)), (BoolOp::Or, Formula::or2(a, b))] {
            let composed = lift(Mtdfa::compose(&mut ctx, &ta, &tb, op))?;
            let direct = lift(Mtdfa::translate(&mut ctx, joined))?;
            ensure(lift(Mtdfa::equivalent(&mut ctx, &composed, &direct))?, || {
                format!("pair {k}: compose {op:?} of `{a}` and `{b}`")
            })?;
        }
        let twice = lift(lift(ta.complement(&mut ctx))?.complement(&mut ctx))?;
        ensure(lift(Mtdfa::equivalent(&mut ctx, &twice, &ta))?, || {
            format!("pair {k}: complement of `{a}` is not an involution")
        })?;
        let neg = lift(ta.complement(&mut ctx))?;
        let direct = lift(Mtdfa::translate(&mut ctx, Formula::not(a)))?;
        ensure(lift(Mtdfa::equivalent(&mut ctx, &neg, &direct))?, || {
            format!("pair {k}: complement of `{a}` differs from its negation")
        })?;
    }
    Ok("200 pairs".into())
}

fn toggles() -> Vec<PipelineOptions> {
    (0..16u32)
        .map(|bits| {
            let mut o = PipelineOptions::default();
            o.preprocess = bits & 1 != 0;
            o.decompose = bits & 2 != 0;
            o.solve.one_step = bits & 4 != 0;
            o.solve.early_exit = bits & 8 != 0;
            o
        })
        .collect()
}

fn criterion_8(exhaustive: &[Formula], games: &[Formula]) -> Outcome {
    let options = toggles();
    let mut verdicts = 0;
    let mut check = |f: Formula, part: &Partition| -> std::result::Result<(), String> {
        for sem in [Semantics::Mealy, Semantics::Moore] {
            let reference = lift(explicit_realizable(f, part, sem))?;
            for o in &options {
                let r = lift(solve_decomposed(f, part, sem, o))?;
                ensure(r.is_realizable() == reference, || {
                    format!("{f} {sem:?} {o:?}: {} but the oracle says {reference}", r.status)
                })?;
                verdicts += 1;
            }
        }
        Ok(())
    };
    let ab = Partition::new(["a"], ["b"]);
    for &f in exhaustive {
        check(f, &ab)?;
    }
    let part = game_partition();
    for &f in games {
        check(f, &part)?;
    }
    Ok(format!("{verdicts} verdicts over 16 toggle combinations"))
}

/// `G(i1 -> F o1) & ... & G(in -> F on)`, alone or with a minimum length
/// of three.
fn family(n: usize, strict: bool) -> (Formula, Partition) {
    let ins: Vec<String> = (1..=n).map(|k| format!("i{k}")).collect();
    let outs: Vec<String> = (1..=n).map(|k| format!("o{k}")).collect();
    let mut body: Vec<String> = (1..=n).map(|k| format!("G(i{k} -> F o{k})")).collect();
    if strict {
        body.push("X[!] X[!] tt".into());
    }
    (p(&body.join(" & ")), Partition::new(ins, outs))
}

fn criterion_9() -> Outcome {
    let mut strict_seen = false;
    let mut rows = Vec::new();
    for strict in [false, true] {
        for n in 1..=4 {
            let (f, part) = family(n, strict);
            let bfs = lift(realizability(f, &part, Semantics::Mealy, &SolveOptions::default()))?;
            let full = SolveOptions {
                mode: Mode::Full,
                ..SolveOptions::default()
            };
            let total = lift(realizability(f, &part, Semantics::Mealy, &full))?;
            ensure(bfs.status == total.status, || format!("n={n}: verdicts differ"))?;
            let (a, b) = (bfs.stats.states_translated, total.stats.states_translated);
            ensure(a <= b, || format!("n={n}: bfs translated {a} states, full {b}"))?;
            if a < b && bfs.stats.early_exit.is_some() {
                strict_seen = true;
            }
            rows.push(format!("{a}/{b}"));
        }
    }
    ensure(strict_seen, || format!("no instance with early exit and fewer states: {rows:?}"))?;
    Ok(format!("bfs/full translated states: {}", rows.join(" ")))
}

fn exhaustive() -> &'static [Formula] {
    static CORPUS: OnceLock<Vec<Formula>> = OnceLock::new();
    CORPUS.get_or_init(exhaustive_corpus)
}

fn games() -> &'static [Formula] {
    static CORPUS: OnceLock<Vec<Formula>> = OnceLock::new();
    CORPUS.get_or_init(game_corpus)
}

/// Runs every criterion, or only those whose numbers are given as
/// arguments.
fn main() -> ExitCode {
    let started = Instant::now();
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: Vec<(u32, &str, Duration, fn() -> Outcome)> = vec![
        (1, "running example state counts", Duration::from_secs(1), criterion_1),
        (2, "golden verdicts", Duration::from_secs(1), criterion_2),
        (3, "translation agrees with the semantics", Duration::from_secs(300), || {
            criterion_3(exhaustive(), &random_corpus())
        }),
        (4, "realizability agrees with the explicit game", Duration::from_secs(600), || {
            criterion_4(games())
        }),
        (5, "incremental solver agrees with the attractor", Duration::from_secs(60), criterion_5),
        (6, "diagram operations", Duration::from_secs(60), criterion_6),
        (7, "composition and complement", Duration::from_secs(300), criterion_7),
        (8, "toggles never change a verdict", Duration::MAX, || criterion_8(exhaustive(), games())),
        (9, "breadth-first exploration stops early", Duration::MAX, criterion_9),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {n} PASS {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    println!("total {:.1?}", started.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
