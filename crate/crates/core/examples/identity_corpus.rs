//! Evaluates single DSL statements and the shipped identity corpus.
//!
//! cargo run --example identity_corpus [-- corpus.txt]

use qhopf::builders::sweedler;
use qhopf::cli::SHIPPED_CORPUS;
use qhopf::derived::random_invertible;
use qhopf::dsl::{evaluate_stmt, parse, run_corpus, Env, LineStatus, Value};
use qhopf::twisting::random_twist;
use qhopf::{QuasiHopf, Result};

fn main() -> Result<()> {
    let q = QuasiHopf::new(sweedler()?)?;
    let env = Env::new(&q).with_twist(random_twist(&q, 1)?).with_modifier(random_invertible(&q, 1)?.0)?;
    for src in ["map[S](map[S](basis(i))) == u * basis(i) * uinv", "u_T == u", "u * map[S](u)"] {
        match evaluate_stmt(&env, &parse(src)?)? {
            Value::Verdict { holds, .. } => println!("{src}  ->  {holds}"),
            Value::Tensor(t) => {
                let terms: Vec<String> = t.to_vec().iter().map(|(i, x)| format!("{x}·e{i}")).collect();
                println!("{src}  ->  {}", terms.join(" + "))
            }
        }
    }
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable corpus"),
        None => SHIPPED_CORPUS.to_string(),
    };
    let lines = run_corpus(&env, &text, 4)?;
    let count = |f: fn(&LineStatus) -> bool| lines.iter().filter(|l| f(&l.status)).count();
    println!(
        "corpus: {} pass, {} fail, {} skipped",
        count(|s| matches!(s, LineStatus::Pass)),
        count(|s| matches!(s, LineStatus::Fail(_))),
        count(|s| matches!(s, LineStatus::Skipped(_)))
    );
    Ok(())
}
