//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use cfg_closure::closure::{cat_witness, clo_witness, lift_form, union_witness};
use cfg_closure::generate::{random_derivation, random_form, rng};
use cfg_closure::harness::{
    build_concat, build_kleene, build_union, check_theorem, fixed_corpus, run_suite, Mutant, NamedGrammar, SuiteConfig,
    TheoremId,
};
use cfg_closure::search::{enumerate_derivations, Exploration};
use cfg_closure::text::parse_grammar;
use cfg_closure::{
    check_derivation, compose_derivations, concat, embed_derivation, kleene, parse_certificate, sentences,
    serialize_certificate, serialize_grammar, union, validate_grammar, Bounds, Derivation, Grammar, LiftSpec,
    SententialForm, Side, Symbol,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn corpus() -> Vec<NamedGrammar> {
    fixed_corpus()
}

fn final_of(g: &Grammar, d: &Derivation) -> Result<SententialForm, String> {
    check_derivation(g, d).into_result().map_err(|e| e.to_string())
}

fn derivation_engine() -> Outcome {
    let corpus = corpus();
    let mut r = rng(2024);
    for i in 0..1000 {
        let g = &corpus[i % corpus.len()].grammar;
        let d = random_derivation(g, &g.start_form(), &mut r, 8, 10);
        let f = final_of(g, &d)?;

        // Reflexivity.
        let refl = Derivation::reflexive(f.clone());
        ensure!(final_of(g, &refl)? == f, "#{i}: reflexive derivation moved");
        ensure!(
            compose_derivations(g, &Derivation::reflexive(d.start.clone()), &d).map_err(|e| e.to_string())? == d,
            "#{i}: left identity"
        );
        ensure!(compose_derivations(g, &d, &refl).map_err(|e| e.to_string())? == d, "#{i}: right identity");

        // Transitivity at a random split, and onto a fresh continuation.
        let cut = r.gen_range(0..=d.step_count());
        let head = Derivation::new(d.start.clone(), d.steps[..cut].to_vec());
        let mid = final_of(g, &head)?;
        let tail = Derivation::new(mid, d.steps[cut..].to_vec());
        let joined = compose_derivations(g, &head, &tail).map_err(|e| e.to_string())?;
        ensure!(joined.step_count() == head.step_count() + tail.step_count(), "#{i}: step count not additive");
        ensure!(final_of(g, &joined)? == f, "#{i}: split composition ends elsewhere");
        let more = random_derivation(g, &f, &mut r, 4, 12);
        let longer = compose_derivations(g, &d, &more).map_err(|e| e.to_string())?;
        ensure!(longer.step_count() == d.step_count() + more.step_count(), "#{i}: continuation not additive");
        ensure!(final_of(g, &longer)? == final_of(g, &more)?, "#{i}: continuation ends elsewhere");

        // Context embedding.
        let (left, right) = (random_form(g, &mut r, 3), random_form(g, &mut r, 3));
        let e = embed_derivation(g, &d, &left, &right).map_err(|e| e.to_string())?;
        ensure!(e.step_count() == d.step_count(), "#{i}: embedding changed the step count");
        ensure!(e.start == d.start.surround(&left, &right), "#{i}: embedded start");
        ensure!(final_of(g, &e)? == f.surround(&left, &right), "#{i}: embedded final form");
    }
    Ok("1000 derivations".into())
}

fn construction_laws() -> Outcome {
    let corpus = corpus();
    let mut cases = 0;
    for a in &corpus {
        let (g1, p1) = (&a.grammar, a.grammar.rules().len());
        for b in &corpus {
            let (g2, p2) = (&b.grammar, b.grammar.rules().len());
            let u = union(g1, g2).map_err(|e| e.to_string())?;
            let c = concat(g1, g2).map_err(|e| e.to_string())?;
            ensure!(u.rules().len() == p1 + p2 + 2, "union {},{}: {} rules", a.name, b.name, u.rules().len());
            ensure!(c.rules().len() == p1 + p2 + 1, "concat {},{}: {} rules", a.name, b.name, c.rules().len());
            ensure!(validate_grammar(&u).is_ok(), "union {},{} invalid", a.name, b.name);
            ensure!(validate_grammar(&c).is_ok(), "concat {},{} invalid", a.name, b.name);
            cases += 1;
        }
        let k = kleene(g1).map_err(|e| e.to_string())?;
        ensure!(k.rules().len() == p1 + 2, "kleene {}: {} rules", a.name, k.rules().len());
        ensure!(validate_grammar(&k).is_ok(), "kleene {} invalid", a.name);
        cases += 1;
    }
    ensure!(cases == 42, "{cases} cases");
    Ok("36 pairs, 6 unary".into())
}

fn expect(g: &Grammar, w: &Derivation, expected: &SententialForm, steps: usize, what: &str) -> Result<(), String> {
    ensure!(w.start == g.start_form(), "{what}: witness starts at [{}]", w.start);
    let f = final_of(g, w).map_err(|e| format!("{what}: {e}"))?;
    ensure!(&f == expected, "{what}: ends at [{f}], expected [{expected}]");
    ensure!(w.step_count() == steps, "{what}: {} steps, expected {steps}", w.step_count());
    Ok(())
}

fn direct_theorems() -> Outcome {
    let bounds = Bounds::new(5, 10);
    let corpus = corpus();
    let paths: Vec<Vec<(Derivation, SententialForm)>> = corpus
        .iter()
        .map(|g| enumerate_derivations(&g.grammar, &bounds).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut witnesses = 0usize;

    for (i, a) in corpus.iter().enumerate() {
        for (j, b) in corpus.iter().enumerate() {
            let (g1, g2) = (&a.grammar, &b.grammar);
            let name = format!("{},{}", a.name, b.name);
            let u = union(g1, g2).map_err(|e| e.to_string())?;
            for (side, list) in [(Side::First, &paths[i]), (Side::Second, &paths[j])] {
                let spec = if side == Side::First { LiftSpec::UNION_FIRST } else { LiftSpec::UNION_SECOND };
                for (d, f) in list {
                    let w = union_witness(g1, g2, side, d).map_err(|e| e.to_string())?;
                    expect(&u, &w, &lift_form(spec, f), d.step_count() + 1, &format!("union {name}"))?;
                    witnesses += 1;
                }
            }
            let c = concat(g1, g2).map_err(|e| e.to_string())?;
            for (d1, f1) in &paths[i] {
                let lifted = lift_form(LiftSpec::CAT_FIRST, f1);
                for (d2, f2) in &paths[j] {
                    let w = cat_witness(g1, g2, d1, d2).map_err(|e| e.to_string())?;
                    let expected = lifted.concat(&lift_form(LiftSpec::CAT_SECOND, f2));
                    expect(&c, &w, &expected, d1.step_count() + d2.step_count() + 1, &format!("concat {name}"))?;
                    witnesses += 1;
                }
            }
        }
    }

    for (i, a) in corpus.iter().enumerate() {
        let g = &a.grammar;
        let k = kleene(g).map_err(|e| e.to_string())?;
        let mut run = |seq: &[&(Derivation, SententialForm)]| -> Result<(), String> {
            let ds: Vec<Derivation> = seq.iter().map(|(d, _)| d.clone()).collect();
            let expected: SententialForm =
                seq.iter().flat_map(|(_, f)| lift_form(LiftSpec::CLO, f).into_symbols()).collect();
            let steps = ds.iter().map(Derivation::step_count).sum::<usize>() + ds.len() + 1;
            let w = clo_witness(g, &ds).map_err(|e| e.to_string())?;
            witnesses += 1;
            expect(&k, &w, &expected, steps, &format!("kleene {} n={}", a.name, ds.len()))
        };
        run(&[])?;
        for p in &paths[i] {
            run(&[p])?;
        }
        for p in &paths[i] {
            for q in &paths[i] {
                run(&[p, q])?;
            }
        }
        // Three segments over every triple of reachable forms.
        let explored = Exploration::run(g, &g.start_form(), &bounds, None).map_err(|e| e.to_string())?;
        let minimal: Vec<(Derivation, SententialForm)> =
            explored.sorted().into_iter().map(|(f, _)| (explored.derivation_to(&f).expect("reachable"), f)).collect();
        for x in &minimal {
            for y in &minimal {
                for z in &minimal {
                    run(&[x, y, z])?;
                }
            }
        }
    }

    let suite = run_suite(&SuiteConfig { corpus, bounds, mutant: Mutant::None });
    let direct: Vec<_> = suite
        .reports
        .iter()
        .filter(|r| matches!(r.id, TheoremId::UniCorrect | TheoremId::CatCorrect | TheoremId::CloCorrect))
        .collect();
    ensure!(direct.len() == 36 + 36 + 6, "{} harness reports", direct.len());
    if let Some(r) = direct.iter().find(|r| !r.passed()) {
        return Err(r.to_string());
    }
    Ok(format!("{witnesses} witnesses, {} harness checks", direct.len()))
}

fn inverse_theorems() -> Outcome {
    let suite = run_suite(&SuiteConfig {
        corpus: corpus(),
        bounds: Bounds::new(6, 10).with_cap(1_000_000),
        mutant: Mutant::None,
    });
    let inverse: Vec<_> = suite
        .reports
        .iter()
        .filter(|r| matches!(r.id, TheoremId::UniCorrectInv | TheoremId::CatCorrectInv | TheoremId::CloCorrectInv))
        .collect();
    ensure!(inverse.len() == 36 + 36 + 6, "{} reports", inverse.len());
    if let Some(r) = inverse.iter().find(|r| !r.passed()) {
        return Err(r.to_string());
    }
    Ok(format!("{} checks", inverse.len()))
}

/// Membership in (a^n b^n)*, decided directly on the string.
fn in_star_of_balanced(w: &str) -> bool {
    let b = w.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let n = b[i..].iter().take_while(|&&c| c == b'a').count();
        if n == 0 || b.len() < i + 2 * n || b[i + n..i + 2 * n].iter().any(|&c| c != b'b') {
            return false;
        }
        i += 2 * n;
    }
    true
}

fn words(s: &SententialForm) -> String {
    s.iter()
        .map(|sym| match sym {
            Symbol::T(t) => t.to_string().trim_matches('\'').to_string(),
            Symbol::Nt(n) => panic!("nonterminal {n} in a sentence"),
        })
        .collect()
}

fn oracle_cross_check() -> Outcome {
    let g = |n: &str| corpus().into_iter().find(|g| g.name == n).unwrap().grammar;

    let mut brute = BTreeSet::new();
    for len in 0..=4 {
        for mask in 0..(1u32 << len) {
            let w: String = (0..len).map(|i| if mask >> i & 1 == 1 { 'b' } else { 'a' }).collect();
            if in_star_of_balanced(&w) {
                brute.insert(w);
            }
        }
    }
    let expected: BTreeSet<String> = ["", "ab", "abab", "aabb"].iter().map(|s| s.to_string()).collect();
    ensure!(brute == expected, "brute force gives {brute:?}");
    let k = kleene(&g("G_ab")).map_err(|e| e.to_string())?;
    let found: BTreeSet<String> =
        sentences(&k, &Bounds::new(16, 4)).map_err(|e| e.to_string())?.iter().map(words).collect();
    // Pruning applies to every intermediate form, and the last `S -> a S b`
    // of abab or aabb always produces a form of length 5. Report what a
    // pruning bound of 6 gives on sentences of length at most 4 alongside.
    let relaxed: BTreeSet<String> = sentences(&k, &Bounds::new(16, 6))
        .map_err(|e| e.to_string())?
        .iter()
        .filter(|s| s.len() <= 4)
        .map(words)
        .collect();
    let closure_check = if found == brute {
        Ok(())
    } else {
        Err(format!(
            "kleene(G_ab) sentences at maxLen=4 are {found:?}, oracle gives {brute:?}; \
             at maxLen=6 restricted to length<=4: {relaxed:?} ({})",
            if relaxed == brute { "matches" } else { "differs" }
        ))
    };

    let (ga, gb) = (g("G_a"), g("G_b"));
    let u = union(&ga, &gb).map_err(|e| e.to_string())?;
    let mut unlifted = BTreeSet::new();
    for s in sentences(&u, &Bounds::new(8, 4)).map_err(|e| e.to_string())? {
        let side = [LiftSpec::UNION_FIRST, LiftSpec::UNION_SECOND]
            .into_iter()
            .find_map(|spec| cfg_closure::closure::unlift_form(spec, &s));
        ensure!(side.is_some(), "union sentence [{s}] mixes sides");
        unlifted.insert(words(&side.unwrap()));
    }
    ensure!(unlifted == BTreeSet::from(["a".to_string(), "b".to_string()]), "union gives {unlifted:?}");

    let c = concat(&ga, &gb).map_err(|e| e.to_string())?;
    let cat: Vec<String> = sentences(&c, &Bounds::new(8, 4))
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| {
            let n = s.iter().take_while(|x| x.outer_spec() == Some(LiftSpec::CAT_FIRST)).count();
            let first = cfg_closure::closure::unlift_form(LiftSpec::CAT_FIRST, &s[..n]).unwrap();
            let second = cfg_closure::closure::unlift_form(LiftSpec::CAT_SECOND, &s[n..]).unwrap();
            words(&first) + &words(&second)
        })
        .collect();
    ensure!(cat == ["ab"], "concat gives {cat:?}");
    closure_check?;
    Ok("kleene, union and concat sentences match".into())
}

fn mutation_sensitivity() -> Outcome {
    let bounds = Bounds::new(4, 8);
    let corpus = corpus();
    let mut notes = Vec::new();
    for m in Mutant::BUILT_IN {
        let target = m.target().expect("built-in mutants have a target");
        let inputs: Vec<Vec<NamedGrammar>> = if target.arity() == 2 {
            corpus.iter().flat_map(|a| corpus.iter().map(move |b| vec![a.clone(), b.clone()])).collect()
        } else {
            corpus.iter().map(|a| vec![a.clone()]).collect()
        };
        let caught = inputs.iter().map(|i| check_theorem(target, i, &bounds, m)).filter(|r| r.failed()).count();
        ensure!(caught > 0, "{} not caught by {target}", m.as_str());

        let out = Command::new(env!("CARGO_BIN_EXE_cfg-closure"))
            .args(["verify", "--max-steps", "4", "--max-len", "8", "--mutant", m.as_str()])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(1), "verify --mutant {} exited {:?}", m.as_str(), out.status.code());
        let text = String::from_utf8_lossy(&out.stdout);
        ensure!(
            text.lines().any(|l| l.starts_with(target.as_str()) && l.contains("FAIL(")),
            "verify --mutant {} printed no {target} failure",
            m.as_str()
        );
        notes.push(format!("{}:{caught}", m.as_str()));
    }

    // The mutated grammars are not what the constructions produce.
    let ga = &corpus[0].grammar;
    ensure!(build_union(ga, ga, Mutant::None) == union(ga, ga).unwrap(), "unmutated union differs");
    ensure!(build_concat(ga, ga, Mutant::None) == concat(ga, ga).unwrap(), "unmutated concat differs");
    ensure!(build_kleene(ga, Mutant::None) == kleene(ga).unwrap(), "unmutated kleene differs");
    Ok(notes.join(" "))
}

fn round_trip() -> Outcome {
    let corpus = corpus();
    let mut grammars: Vec<(String, Grammar)> = Vec::new();
    for a in &corpus {
        grammars.push((a.name.clone(), a.grammar.clone()));
        let k = kleene(&a.grammar).unwrap();
        grammars.push((format!("kleene({})", a.name), k.clone()));
        grammars.push((format!("kleene(kleene({}))", a.name), kleene(&k).unwrap()));
        for b in &corpus {
            let (g1, g2) = (&a.grammar, &b.grammar);
            let u = union(g1, g2).unwrap();
            let c = concat(g1, g2).unwrap();
            grammars.push((format!("kleene(union({},{}))", a.name, b.name), kleene(&u).unwrap()));
            grammars.push((format!("kleene(concat({},{}))", a.name, b.name), kleene(&c).unwrap()));
            grammars.push((format!("union(concat({0},{1}),union({0},{1}))", a.name, b.name), union(&c, &u).unwrap()));
            grammars.push((
                format!("concat(union({0},{1}),kleene({0}))", a.name, b.name),
                concat(&u, &kleene(g1).unwrap()).unwrap(),
            ));
            grammars.push((format!("union({},{})", a.name, b.name), u));
            grammars.push((format!("concat({},{})", a.name, b.name), c));
        }
    }
    let mut certs = 0;
    for (name, g) in &grammars {
        let text = serialize_grammar(g);
        let back = parse_grammar(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure!(&back == g, "{name}: parse changed the grammar");
        ensure!(serialize_grammar(&back) == text, "{name}: not byte-identical");

        let bounds = Bounds::new(3, 8);
        for (d, _) in enumerate_derivations(g, &bounds).map_err(|e| e.to_string())? {
            let text = serialize_certificate(&d);
            let back = parse_certificate(&text).map_err(|e| format!("{name}: {e}"))?;
            ensure!(back == d, "{name}: certificate changed");
            ensure!(serialize_certificate(&back) == text, "{name}: certificate not byte-identical");
            certs += 1;
        }
    }
    Ok(format!("{} grammars, {certs} certificates", grammars.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 derivation engine", derivation_engine, Duration::from_secs(10)),
        ("2 construction laws", construction_laws, Duration::from_secs(1)),
        ("3 direct theorems", direct_theorems, Duration::from_secs(60)),
        ("4 inverse theorems", inverse_theorems, Duration::from_secs(120)),
        ("5 oracle cross-check", oracle_cross_check, Duration::from_secs(60)),
        ("6 mutation sensitivity", mutation_sensitivity, Duration::from_secs(60)),
        ("7 round trip", round_trip, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let t = Instant::now();
        let result = run();
        let took = t.elapsed();
        let result = match result {
            Ok(note) if took > limit => Err(format!("{note}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match result {
            Ok(note) => println!("acceptance {name}: PASS ({note}; {took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("acceptance {name}: FAIL ({why}; {took:.2?})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
