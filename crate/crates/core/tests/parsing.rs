use quartix_core::strata::{self, BUILTIN_LABELS};
use quartix_core::{Field, TernaryQuartic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<TernaryQuartic> {
    let q = Field::rationals();
    let g = Field::gaussian();
    let i = g.generator().unwrap();
    let mut out: Vec<TernaryQuartic> = BUILTIN_LABELS.iter().map(|l| strata::builtin_model(l).unwrap()).collect();
    for t in [(2, 1), (3, 1), (1, 2), (-5, 1), (7, 3)] {
        out.push(strata::z1_model(&q.from_ratio(t.0, t.1).unwrap()).unwrap());
    }
    for t in [g.from_i64(2), &g.one() + &i, &g.from_i64(3) * &i, &g.from_i64(-2) * &i, &g.from_ratio(1, 2).unwrap() + &i] {
        out.push(strata::z4_model(&t).unwrap());
    }
    let fields = [q.clone(), Field::prime(101).unwrap(), g, Field::parse("Q(sqrt(7); s7)").unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    while out.len() < 50 {
        let field = &fields[out.len() % fields.len()];
        let syms: Vec<String> = field.symbols().into_iter().map(|(n, _)| n).collect();
        let mut terms = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=4 - a {
                if rng.gen_bool(0.4) {
                    continue;
                }
                let mut coef = format!("{}/{}", rng.gen_range(-9..=9), rng.gen_range(1..=4));
                if let Some(s) = syms.first() {
                    coef = format!("({coef} + {}{s})", rng.gen_range(-3..=3));
                }
                terms.push(format!("{coef}*X^{a}*Y^{b}*Z^{}", 4 - a - b));
            }
        }
        if let Ok(f) = TernaryQuartic::parse(&terms.join(" + "), field) {
            out.push(f);
        }
    }
    out
}

#[test]
fn print_then_parse_round_trips() {
    let corpus = corpus();
    assert_eq!(corpus.len(), 50);
    for f in corpus {
        let text = f.to_string();
        let back = TernaryQuartic::parse(&text, f.field()).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(back.poly(), f.poly(), "{text}");
    }
}

#[test]
fn printed_model_syntax() {
    let k = Field::parse("Q(sqrt(7); s7)").unwrap();
    let f = TernaryQuartic::parse("(X^2-Y*Z)^2 - (3+s7)*(2*X-Y-Z)*(X-Y-Z)*Y*Z", &k).unwrap();
    assert_eq!(f.poly(), strata::builtin_model("Omega1").unwrap().poly());
    assert!(TernaryQuartic::parse("X^3*Y + Z^4", &Field::rationals()).is_ok());
}

#[test]
fn rejects_bad_input() {
    let q = Field::rationals();
    for bad in ["X^3+Y^4", "X^4 + W^4", "X^4 +", "0*X^4", "X^5 - X^5", "X^2*Y^2 + t*Z^4"] {
        assert!(TernaryQuartic::parse(bad, &q).is_err(), "{bad}");
    }
}
