//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use knowmetric_core::corpus::{
    compute_corpus_stats, ingest_sentences, unique_triples, ArticleId, Location, PredicationId,
    PredicationRecord, SentenceId, SentenceIndex, SentenceRecord, Store, TripleKey,
};
use knowmetric_core::grouping::{
    aggregate_type_pairs, informative_filter, triple_profiles, Granularity, RelationMap, SemTypeGroups,
};
use knowmetric_core::lexicon::{match_cues, Lexicon};
use knowmetric_core::metrics::{
    back_solve_total, build_frequency_table, build_frequency_table_parallel, entropy_weight, score_triples,
    triple_uncertainty, CategoryScope, FrequencyCounter, LogBase,
};
use knowmetric_core::reports::tables::sections_csv;
use knowmetric_core::reports::{run_report, PipelineConfig};
use knowmetric_core::rhetoric::{classify_section, section_cue_distribution, SectionClassifier, SectionLabel};

type Outcome = Result<String, String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed > limit {
        return Err(format!("took {elapsed:?}, limit {limit:?}"));
    }
    Ok(())
}

// printed frequencies and weights, hedging rows then conflicting rows
const TABLE1: [(&str, u64, f64); 18] = [
    ("may/maybe", 10286, 0.00020693),
    ("possibl*", 1751994, 0.01703960),
    ("potential", 2879336, 0.02511068),
    ("seems", 333677, 0.00436449),
    ("perhaps", 84058, 0.00133387),
    ("likely", 1052986, 0.01132548),
    ("sometimes", 119942, 0.00181705),
    ("conflict*", 175516, 0.00252381),
    ("contradict*", 46639, 0.00079566),
    ("controvers*", 208264, 0.00292265),
    ("debat*", 122332, 0.00184838),
    ("disagree*", 31384, 0.00056055),
    ("disprov*", 2517, 0.00005780),
    ("no consensus", 17907, 0.00034016),
    ("questionable*", 21159, 0.00039480),
    ("refut*", 9710, 0.00019647),
    ("uncertain", 227014, 0.00314619),
    ("unknown", 525536, 0.00639116),
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let n = back_solve_total(2_879_336, 0.02511068, LogBase::Ten, 1e7, 1e10).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (pattern, f, printed) in TABLE1 {
        let ie = entropy_weight(f as f64 / n, LogBase::Ten);
        let err = (ie - printed).abs();
        ensure!(err <= 1e-6, "{pattern}: computed {ie:.8}, printed {printed:.8}");
        worst = worst.max(err);
    }
    let shipped = Lexicon::default_lexicon();
    for (pattern, f, _) in TABLE1 {
        let entry = shipped.get(pattern).ok_or(format!("{pattern} missing from shipped lexicon"))?;
        ensure!(entry.reference_frequency == Some(f), "{pattern}: shipped frequency differs");
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("N = {n:.2}, max |error| = {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let lexicon = Lexicon::default_lexicon();
    let table = knowmetric_core::metrics::builtin_table1();
    let texts = [
        "The present study demonstrated that decreased plasma levels of BDNF were independent markers for DR, suggesting a possible role of BDNF in the pathogenesis of DR complications.",
        "BDNF is a potential predictor of diabetic retinopathy progression.",
        "Serum BDNF levels were associated with diabetic retinopathy severity.",
    ];
    let expected: [&[&str]; 3] = [&["possibl*"], &["potential"], &[]];
    let matches: Vec<_> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| lexicon.match_text(SentenceId::new(format!("s{i}")), t))
        .collect();
    for (m, want) in matches.iter().zip(expected) {
        let got: Vec<&str> = m.patterns().collect();
        ensure!(got == want, "{}: cues {got:?}, expected {want:?}", m.sentence_id);
    }
    let key = TripleKey::new("C0108800", "PREDISPOSES", "C0011884");
    let score = triple_uncertainty(&key, &matches, &table, CategoryScope::Any).map_err(|e| e.to_string())?;
    ensure!((score.ie - 0.04215028).abs() <= 1e-6, "U(t) = {:.8}", score.ie);
    ensure!((score.rate - 0.667).abs() <= 5e-4, "rate = {}", score.rate);
    ensure!(format!("{:.3}", score.ie) == "0.042", "U(t) rounds to {:.3}", score.ie);
    Ok(format!("U(t) = {:.8}, rate = {:.3}", score.ie, score.rate))
}

/// Independent tokenizer and substring matcher for the oracle.
fn oracle_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() || ch == '-' || ch == '\'' || ch == '\u{2019}' {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn oracle_match(patterns: &[&str], text: &str) -> Vec<String> {
    let tokens = oracle_tokens(text);
    let mut hits = Vec::new();
    for pattern in patterns {
        let (body, prefix) = match pattern.strip_suffix('*') {
            Some(b) => (b, true),
            None => (*pattern, false),
        };
        let alternatives: Vec<&str> = body.split('/').collect();
        let last = alternatives.len() - 1;
        let mut hit = false;
        for (a, alt) in alternatives.iter().enumerate() {
            let words: Vec<&str> = alt.split_whitespace().collect();
            for start in 0..tokens.len() {
                if start + words.len() > tokens.len() {
                    break;
                }
                let mut ok = true;
                for (k, w) in words.iter().enumerate() {
                    let t = &tokens[start + k];
                    let is_last = k + 1 == words.len();
                    let same = if is_last && prefix && a == last { t.starts_with(w) } else { t == w };
                    if !same {
                        ok = false;
                    }
                }
                if ok {
                    hit = true;
                }
            }
        }
        if hit {
            hits.push(pattern.to_string());
        }
    }
    hits
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let lexicon = Lexicon::default_lexicon();
    let patterns: Vec<&str> = TABLE1.iter().map(|r| r.0).collect();

    let boundary: [(&str, &[&str]); 8] = [
        ("It is impossible to tell.", &[]),
        ("Possibly, it works.", &["possibl*"]),
        ("There is no consensus on dosing.", &["no consensus"]),
        ("There is no clear consensus.", &[]),
        ("No, consensus was reached.", &["no consensus"]),
        ("The mayor may resign.", &["may/maybe"]),
        ("Maybe not; this seems odd.", &["may/maybe", "seems"]),
        ("Non-conflicting and unknowns only.", &[]),
    ];
    for (text, want) in boundary {
        let got: Vec<String> = lexicon.match_text("b".into(), text).patterns().map(str::to_string).collect();
        ensure!(got == want, "`{text}`: matcher {got:?}, expected {want:?}");
        ensure!(oracle_match(&patterns, text) == want, "`{text}`: oracle disagrees with the expected set");
    }

    let vocab = [
        "may", "maybe", "mayor", "possible", "possibly", "impossible", "possibility", "potential",
        "potentially", "seems", "seem", "perhaps", "likely", "unlikely", "sometimes", "conflict",
        "conflicting", "non-conflicting", "contradicts", "contradictory", "controversy", "controversial",
        "debate", "debated", "disagreement", "disproved", "no", "consensus", "questionable", "refuted",
        "refute", "uncertain", "uncertainty", "unknown", "unknowns", "the", "of", "in", "BDNF", "DR",
        "patients", "role", "p", "0.05", "Sjogren's", "No", "Consensus", "POTENTIAL", "It's",
    ];
    let separators = [" ", " ", " ", ", ", "; ", " (", ") ", "-", ": ", ". "];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..1000 {
        let len = rng.gen_range(1..=24);
        let mut text = String::new();
        for k in 0..len {
            if k > 0 {
                text.push_str(separators.choose(&mut rng).unwrap());
            }
            text.push_str(vocab.choose(&mut rng).unwrap());
        }
        text.push('.');
        let sentence = SentenceRecord {
            sentence_id: SentenceId::new(format!("r{i}")),
            article_id: ArticleId::new("A"),
            pub_year: 2000,
            location: Location::Abstract,
            section_header: None,
            text: text.clone(),
        };
        let got: Vec<String> = match_cues(&sentence, &lexicon).patterns().map(str::to_string).collect();
        let want = oracle_match(&patterns, &text);
        ensure!(got == want, "`{text}`: matcher {got:?}, oracle {want:?}");
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("8 boundary cases, 1000 random sentences in {:?}", start.elapsed()))
}

fn synthetic_sentences(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    let words = [
        "may", "possibly", "impossible", "potential", "seems", "perhaps", "likely", "sometimes", "conflict",
        "contradictory", "controversial", "debated", "disagree", "disproved", "no", "consensus",
        "questionable", "refuted", "uncertain", "unknown", "cells", "the", "levels", "were", "higher",
    ];
    (0..n)
        .map(|_| {
            let len = rng.gen_range(3..=15);
            (0..len).map(|_| *words.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let lexicon = Lexicon::default_lexicon();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let corpus = synthetic_sentences(&mut rng, 10_000);
    let single = build_frequency_table(&corpus, &lexicon).map_err(|e| e.to_string())?;
    for parts in 1..=16usize {
        // random assignment of sentences to parts, not just contiguous chunks
        let mut counters: Vec<FrequencyCounter> = (0..parts).map(|_| FrequencyCounter::new(&lexicon)).collect();
        for s in &corpus {
            let k = rng.gen_range(0..parts);
            counters[k].add_text(&lexicon, s);
        }
        let mut merged = FrequencyCounter::new(&lexicon);
        counters.shuffle(&mut rng);
        for c in &counters {
            merged.merge(c);
        }
        let merged = merged.finish(&lexicon, LogBase::Ten).map_err(|e| e.to_string())?;
        ensure!(merged == single, "{parts} random parts differ from the single pass");
        let parallel = build_frequency_table_parallel(&corpus, &lexicon, parts).map_err(|e| e.to_string())?;
        ensure!(parallel == single, "{parts} parallel chunks differ from the single pass");
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("1..=16 parts over 10000 sentences in {:?}", start.elapsed()))
}

fn pred(id: usize, sentence: &str, s: &str, p: &str, o: &str, stype: &str, otype: &str) -> PredicationRecord {
    PredicationRecord {
        predication_id: PredicationId::new(id.to_string()),
        sentence_id: SentenceId::new(sentence),
        article_id: ArticleId::new(sentence.split('.').next().unwrap_or(sentence)),
        subject_cui: s.into(),
        subject_name: format!("{s} name"),
        subject_semtype: stype.into(),
        predicate: p.into(),
        object_cui: o.into(),
        object_name: format!("{o} name"),
        object_semtype: otype.into(),
    }
}

struct Synthetic {
    sentences: SentenceIndex,
    predications: Vec<PredicationRecord>,
}

fn synthetic_corpus(rng: &mut ChaCha8Rng, max_preds: usize, years: i32) -> Synthetic {
    let texts = synthetic_sentences(rng, 60);
    let n_sentences = rng.gen_range(1..=60);
    let sentences: SentenceIndex = (0..n_sentences)
        .map(|i| SentenceRecord {
            sentence_id: SentenceId::new(format!("A{}.ab.{i}", i % 17)),
            article_id: ArticleId::new(format!("A{}", i % 17)),
            pub_year: 2000 + rng.gen_range(0..years),
            location: Location::Abstract,
            section_header: None,
            text: texts[i].clone(),
        })
        .collect();
    let ids: Vec<String> = sentences.iter().map(|s| s.sentence_id.to_string()).collect();
    let cuis = ["C1", "C2", "C3", "C4", "C5"];
    let predicates = ["TREATS", "CAUSES", "NEG_CAUSES", "PREDISPOSES", "PART_OF"];
    let types = ["dsyn", "aapp", "gngm", "topp", "neop"];
    let n = rng.gen_range(0..=max_preds);
    let predications = (0..n)
        .map(|i| {
            pred(
                i,
                ids.choose(rng).unwrap(),
                cuis.choose(rng).unwrap(),
                predicates.choose(rng).unwrap(),
                cuis.choose(rng).unwrap(),
                types.choose(rng).unwrap(),
                types.choose(rng).unwrap(),
            )
        })
        .collect();
    Synthetic { sentences, predications }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for round in 0..200 {
        let c = synthetic_corpus(&mut rng, 500, 10);
        let preds = &c.predications;

        let mut brute_unique: Vec<TripleKey> = Vec::new();
        for i in 0..preds.len() {
            let seen_before = (0..i).any(|j| preds[j].key() == preds[i].key());
            if !seen_before {
                brute_unique.push(preds[i].key());
            }
        }
        let unique = unique_triples(preds);
        ensure!(unique.len() == brute_unique.len(), "round {round}: unique {} vs {}", unique.len(), brute_unique.len());
        for k in &brute_unique {
            ensure!(unique.contains_key(k), "round {round}: {k} missing");
        }

        let year = |p: &PredicationRecord| c.sentences.get(p.sentence_id.as_str()).unwrap().pub_year;
        let mut brute_novel: BTreeMap<i32, u64> = BTreeMap::new();
        for i in 0..preds.len() {
            let y = year(&preds[i]);
            let earlier = (0..preds.len()).any(|j| {
                preds[j].key() == preds[i].key() && (year(&preds[j]) < y || (year(&preds[j]) == y && j < i))
            });
            if !earlier {
                *brute_novel.entry(y).or_default() += 1;
            }
        }
        let stats = compute_corpus_stats(preds, &c.sentences);
        for (y, s) in stats.years() {
            let want = brute_novel.get(&y).copied().unwrap_or(0);
            ensure!(s.novel_triple_count == want, "round {round}, {y}: novel {} vs {want}", s.novel_triple_count);
        }
        ensure!(stats.total_novel() == unique.len() as u64, "round {round}: sum of novel != unique");
    }
    Ok("200 synthetic corpora".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let lexicon = Lexicon::default_lexicon();
    let table = knowmetric_core::metrics::builtin_table1();
    let groups = SemTypeGroups::builtin(Granularity::Fine);
    for round in 0..100 {
        let c = synthetic_corpus(&mut rng, 400, 10);
        let matches: HashMap<_, _> = c
            .sentences
            .iter()
            .map(|s| (s.sentence_id.clone(), match_cues(s, &lexicon)))
            .collect();
        let support = knowmetric_core::corpus::triple_support(&c.predications);
        let scope = [CategoryScope::Any, CategoryScope::Hedging, CategoryScope::Conflicting][round % 3];
        let scored = score_triples(&support, &matches, &table, scope).map_err(|e| e.to_string())?;
        let profiles = triple_profiles(&c.predications);
        let pairs = aggregate_type_pairs(&scored, &profiles, &groups);

        let members: usize = pairs.iter().map(|p| p.member_triples).sum();
        ensure!(members == scored.len(), "round {round}: {members} members for {} triples", scored.len());
        for pair in &pairs {
            let mut ie = 0.0;
            for t in &scored {
                let p = &profiles[&t.key];
                if groups.group(&p.subject_semtype) == pair.subject_group
                    && groups.group(&p.object_semtype) == pair.object_group
                {
                    ie += t.score.ie;
                }
            }
            let tol = 1e-12 * ie.abs().max(f64::MIN_POSITIVE);
            ensure!(
                (pair.score.ie - ie).abs() <= tol,
                "round {round}: {}/{} ie {} vs {ie}",
                pair.subject_group,
                pair.object_group,
                pair.score.ie
            );
        }
    }
    Ok("100 scored corpora".into())
}

fn criterion_7() -> Outcome {
    let map = RelationMap::default_map();
    let examples = [
        pred(1, "P2.ab.1", "C0038250", "PART_OF", "C0005953", "cell", "tisu"),
        pred(2, "P2.ab.2", "C0857121", "PROCESS_OF", "C0030705", "dsyn", "podg"),
        pred(3, "P3.ab.2", "C1417651", "NEG_PREDISPOSES", "C0011860", "gngm", "dsyn"),
        pred(4, "P3.ab.2", "C1417651", "NEG_PREDISPOSES", "C0020538", "gngm", "dsyn"),
    ];
    let kept: Vec<String> = informative_filter(&examples, &map)
        .iter()
        .map(|p| p.predicate.clone())
        .collect();
    ensure!(kept == ["NEG_PREDISPOSES", "NEG_PREDISPOSES"], "kept {kept:?}");
    Ok("PART_OF and PROCESS_OF dropped, NEG_PREDISPOSES kept".into())
}

fn criterion_8() -> Outcome {
    let dir = fixtures().join("sections");
    let (sentences, report) = ingest_sentences(&dir.join("SENTENCES.tsv"), None).map_err(|e| e.to_string())?;
    ensure!(report.rejected() == 0, "fixture rows rejected");
    let gold: BTreeMap<String, SectionLabel> = std::fs::read_to_string(dir.join("GOLD.tsv"))
        .map_err(|e| e.to_string())?
        .lines()
        .skip(1)
        .map(|l| {
            let (id, label) = l.split_once('\t').expect("two columns");
            (id.to_string(), label.parse().expect("gold label"))
        })
        .collect();
    let classifier = SectionClassifier::default();
    let mut agree = 0;
    let mut seen = BTreeSet::new();
    for s in sentences.iter() {
        let got = classify_section(s, &classifier);
        let want = gold[s.sentence_id.as_str()];
        ensure!(got == want, "{} ({:?}): {got} vs gold {want}", s.sentence_id, s.section_header);
        seen.insert(want);
        agree += 1;
    }
    ensure!(agree == gold.len(), "{agree} of {} gold sentences classified", gold.len());
    ensure!(seen.len() == 5, "fixture covers {} labels", seen.len());

    let labels = classifier.classify_corpus(&sentences);
    let lexicon = Lexicon::default_lexicon();
    let matches = sentences.iter().map(|s| (s.sentence_id.clone(), match_cues(s, &lexicon))).collect();
    let dist = section_cue_distribution(&labels, &matches);
    let csv = sections_csv(&dist, &SectionLabel::FIGURE);
    let rows: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap_or("")).collect();
    ensure!(rows == ["background", "objectives", "results", "conclusions"], "figure rows {rows:?}");
    Ok(format!("{agree}/{} gold labels", gold.len()))
}

fn read_dir_bytes(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        out.insert(name, std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn criterion_9() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let f = fixtures();
    let store = Store::ingest(&f.join("SENTENCES.tsv"), &f.join("PREDICATIONS.tsv"), None, &tmp.path().join("store"))
        .map_err(|e| e.to_string())?;
    let config = PipelineConfig::default();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_report(&store, &config, &a).map_err(|e| e.to_string())?;
    let reopened = Store::open(&store.dir).map_err(|e| e.to_string())?;
    run_report(&reopened, &config, &b).map_err(|e| e.to_string())?;
    let (fa, fb) = (read_dir_bytes(&a)?, read_dir_bytes(&b)?);
    ensure!(fa.keys().eq(fb.keys()), "file sets differ");
    let mut tabular = 0;
    for (name, bytes) in &fa {
        ensure!(fb[name] == *bytes, "{name} differs between runs");
        if name.ends_with(".csv") || name.ends_with(".tsv") {
            tabular += 1;
        }
    }
    ensure!(tabular >= 6, "only {tabular} tabular outputs");
    Ok(format!("{} files identical, {tabular} of them CSV/TSV", fa.len()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({ms:.0} ms) {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({ms:.0} ms) {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
