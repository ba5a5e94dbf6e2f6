//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use persuade_core::campaign::{self, Config, Hygiene, PropertyReport};
use persuade_core::fixtures;
use persuade_core::model::{per_recommendation, sender_utility, PaymentModel};
use persuade_core::multi::{solve_budget_balanced, MultiAgentInstance, DEFAULT_COLUMN_LIMIT};
use persuade_core::rational::{int, rat, Rational};
use persuade_core::single::solve_optimal;

type Check = Result<(), String>;

fn same(what: &str, found: &Rational, expected: &Rational) -> Check {
    if found == expected {
        Ok(())
    } else {
        Err(format!("{what}: got {found}, expected {expected}"))
    }
}

fn lp_optimum(instance: &persuade_core::PersuasionInstance, model: PaymentModel, hygiene: &mut Vec<String>) -> Result<Rational, String> {
    let sol = solve_optimal(instance, model).map_err(|e| e.to_string())?;
    if !persuade_core::lp::certify(&sol.lp.problem, &sol.solution) {
        hygiene.push(format!("uncertified LP ({model})"));
    }
    if !persuade_core::single::verify_argmax_certificate(instance, &sol.scheme, &sol.dual) {
        hygiene.push(format!("dual argmax check failed ({model})"));
    }
    Ok(sol.objective)
}

fn binary_types_example(hygiene: &mut Vec<String>) -> Check {
    let inst = fixtures::binary_types();
    let a = fixtures::binary_types_scheme_a(&inst).map_err(|e| e.to_string())?;
    let b = fixtures::binary_types_scheme_b(&inst).map_err(|e| e.to_string())?;
    same("scheme A utility", &sender_utility(&inst, &a).map_err(|e| e.to_string())?, &rat(17, 16))?;
    same("scheme B utility", &sender_utility(&inst, &b).map_err(|e| e.to_string())?, &rat(9, 8))?;
    same("arbitrary-payment LP", &lp_optimum(&inst, PaymentModel::Arbitrary, hygiene)?, &rat(9, 8))?;
    for (scheme, expected) in [(&a, rat(-6, 16)), (&b, rat(-1, 2))] {
        let per = per_recommendation(&inst, scheme.distribution(), scheme.payments()).map_err(|e| e.to_string())?;
        for p in &per {
            same("per-recommendation payment", p, &expected)?;
        }
    }
    Ok(())
}

fn zero_sum_example(hygiene: &mut Vec<String>) -> Check {
    let inst = fixtures::zero_sum();
    let expected = [
        (PaymentModel::Zero, rat(1, 2)),
        (PaymentModel::NonNegative, rat(1, 2)),
        (PaymentModel::Arbitrary, rat(3, 2)),
        (PaymentModel::BudgetBalanced, int(1)),
    ];
    for (model, value) in expected {
        same(model.name(), &lp_optimum(&inst, model, hygiene)?, &value)?;
    }
    for q in [int(0), rat(1, 4), rat(1, 2)] {
        let s = fixtures::zero_sum_q_scheme(&inst, &q).map_err(|e| e.to_string())?;
        same("q-family utility", &sender_utility(&inst, &s).map_err(|e| e.to_string())?, &(rat(3, 2) - &q))?;
    }
    let half = fixtures::zero_sum_q_scheme(&inst, &rat(1, 2)).map_err(|e| e.to_string())?;
    if !PaymentModel::BudgetBalanced.admits(half.payments()) {
        return Err("q = 1/2 is not budget balanced".into());
    }
    let encoded = MultiAgentInstance::from_two_action(&inst).map_err(|e| e.to_string())?;
    let bb = solve_budget_balanced(&encoded, DEFAULT_COLUMN_LIMIT).map_err(|e| e.to_string())?;
    same("one-receiver budget-balanced characterization", &bb.objective, &int(1))
}

fn line(ok: bool, id: usize, text: &str, detail: &str) -> bool {
    println!("{} criterion {id:>2}: {text}{}", if ok { "PASS" } else { "FAIL" }, if detail.is_empty() { String::new() } else { format!(" [{detail}]") });
    ok
}

fn property(id: usize, text: &str, rep: &PropertyReport, expected_total: usize) -> bool {
    let mut detail = format!("{}/{}", rep.passed, rep.total());
    for (k, v) in &rep.notes {
        detail.push_str(&format!(" {k}={v}"));
    }
    if let Some(f) = rep.failures.first() {
        detail.push_str(&format!("; first failure seed {}: {}", f.seed, f.detail));
    }
    line(rep.ok() && rep.total() == expected_total, id, text, &detail)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let base = Config::default();
    let mut all = true;
    let mut fixture_hygiene = Vec::new();

    let r = binary_types_example(&mut fixture_hygiene);
    all &= line(r.is_ok(), 1, "two i.i.d. binary-type actions: 17/16, 9/8, LP 9/8, payments -6/16 and -1/2", &r.err().unwrap_or_default());
    let r = zero_sum_example(&mut fixture_hygiene);
    all &= line(r.is_ok(), 2, "zero-sum example: optima 1/2, 1/2, 3/2, 1 and the q-family 3/2 - q", &r.err().unwrap_or_default());

    let mut hygiene = Hygiene::default();
    let rep = campaign::payment_identity(&base.with_seeds(200));
    all &= property(3, "payment identity on 200 random triples", &rep, 200);
    let rep = campaign::lambda_star(&base.with_seeds(100), &mut hygiene);
    all &= property(4, "lambda* scheme = zero-payment LP, grid monotone (100 symmetric)", &rep, 100);
    let rep = campaign::two_action_canonical(&base.with_seeds(200), &mut hygiene);
    all &= property(5, "argmax s + 2r = arbitrary-payment LP (200 two-action)", &rep, 200);
    let rep = campaign::symmetric_canonical(&Config { max_actions: 4, ..base.with_seeds(100) }, &mut hygiene);
    all &= property(6, "argmax s + n/(n-1) r = arbitrary-payment LP (100 symmetric, n <= 4)", &rep, 100);
    let rep = campaign::dichotomy(&base.with_seeds(100), &mut hygiene);
    all &= property(7, "non-negative dichotomy = LP with consistent branch (100 symmetric)", &rep, 100);
    let rep = campaign::multi_characterizations(&base.with_seeds(50), &mut hygiene);
    all &= property(8, "virtual payoff / total payoff = LP, nesting, balanced payments (50 multi)", &rep, 50);
    let rep = campaign::reduction(&base.with_seeds(50), &mut hygiene);
    all &= property(9, "dropped LP, repair and constraint generation = full LP (50 multi)", &rep, 50);

    let rep = hygiene.finish();
    let fixture_ok = fixture_hygiene.is_empty();
    let detail = format!(
        "{}{}",
        rep.notes.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "),
        fixture_hygiene.first().map(|f| format!("; {f}")).unwrap_or_default()
    );
    all &= line(rep.ok() && fixture_ok, 10, "every LP certified with zero gap; every optimum passes the dual argmax check", &detail);

    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
