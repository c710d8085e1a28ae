//! Bundled example suite behind the `repro` subcommand: the worked examples
//! the library is pinned to, re-run end to end with timings, plus seeded
//! random spot checks and a negative control proving that verification
//! actually rejects a doctored certificate.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use zlift::arith::{gcd, gcd_all, is_unit_mod};
use zlift::json::CertificateJson;
use zlift::lifting::{
    recheck, sl_lift, sl_surject_projective, sp_extend_column, sp_extend_row,
    sp_surject_projective, LiftCertificate,
};
use zlift::projective::{
    crt_bijectivity_check, enumerate_classes, enumerate_classes_with_budget, EnumerationBudget,
    ProjPoint, Weights,
};
use zlift::unital::{diag_det_one, usc_shift_mod};
use zlift::{Ideal, IntMatrix, SymplecticForm};

use crate::Outcome;

struct Item {
    name: &'static str,
    status: &'static str,
    millis: u64,
    detail: String,
}

fn run_item(items: &mut Vec<Item>, name: &'static str, f: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let (status, detail) = match f() {
        Ok(d) => ("pass", d),
        Err(d) => ("fail", d),
    };
    items.push(Item {
        name,
        status,
        millis: start.elapsed().as_millis() as u64,
        detail,
    });
}

fn skip(items: &mut Vec<Item>, name: &'static str, why: &str) {
    items.push(Item {
        name,
        status: "skip",
        millis: 0,
        detail: why.to_string(),
    });
}

pub fn run(budget_small: bool, seed: u64) -> Outcome {
    let mut items = Vec::new();

    run_item(&mut items, "class_table_mod_5_weights_1_2", || {
        let table = enumerate_classes(&ideal(5)?, &weights(&[1, 2])?).map_err(text)?;
        expect_count(table.class_count(), 7)?;
        Ok(format!(
            "7 classes covering {} unital pairs",
            table.total_points()
        ))
    });

    run_item(&mut items, "class_tables_small_primes", || {
        for p in [3u64, 7, 11, 13] {
            let table = enumerate_classes(&ideal(p)?, &weights(&[1, 2])?).map_err(text)?;
            expect_count(table.class_count(), p as usize + 2)?;
        }
        Ok("counts are p + 2 for p = 3, 7, 11, 13".into())
    });

    if budget_small {
        skip(
            &mut items,
            "class_table_mod_241_weights_1_2",
            "skipped: modulus above the small budget",
        );
    } else {
        run_item(&mut items, "class_table_mod_241_weights_1_2", || {
            let budget = EnumerationBudget {
                max_modulus: 300,
                max_dim: 4,
            };
            let table = enumerate_classes_with_budget(&ideal(241)?, &weights(&[1, 2])?, budget)
                .map_err(text)?;
            expect_count(table.class_count(), 243)?;
            Ok("243 classes".into())
        });
    }

    run_item(&mut items, "crt_bijection_15_weights_1_2", || {
        let ok = crt_bijectivity_check(&ideal(15)?, &[ideal(3)?, ideal(5)?], &weights(&[1, 2])?)
            .map_err(text)?;
        if ok {
            Ok("componentwise reduction is a bijection for n = 15".into())
        } else {
            Err("reduction mod 3 x mod 5 failed to biject".into())
        }
    });

    run_item(&mut items, "sl_lift_mod_5", || {
        let m = IntMatrix::from_rows(vec![
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(3)],
        ])
        .map_err(text)?;
        let cert = sl_lift(&m, &ideal(5)?).map_err(text)?;
        recheck_all(&cert)?;
        Ok("lift found and independently rechecked".into())
    });

    run_item(&mut items, "sl_surjection_four_primes", || {
        let cert = sl_surject_projective(&four_prime_points()?).map_err(text)?;
        recheck_all(&cert)?;
        Ok(format!("lambdas {}", lambda_list(&cert)))
    });

    run_item(&mut items, "sp_surjection_four_primes", || {
        let cert = sp_surject_projective(&four_prime_points()?).map_err(text)?;
        recheck_all(&cert)?;
        Ok(format!("lambdas {}", lambda_list(&cert)))
    });

    run_item(&mut items, "sp_extensions_every_position", || {
        let row: Vec<BigInt> = [3, 1, 4, 1].iter().map(|&v| BigInt::from(v)).collect();
        let form = SymplecticForm::new(2).map_err(text)?;
        for position in 1..=4usize {
            let m = sp_extend_row(&row, 2, position).map_err(text)?;
            if !m.is_symplectic(&form, &Ideal::exact()).map_err(text)? {
                return Err(format!("row completion at position {position} not symplectic"));
            }
            if m.row_slice(position - 1) != row.as_slice() {
                return Err(format!("row {position} does not carry the input"));
            }
            let m = sp_extend_column(&row, 2, position).map_err(text)?;
            if !m.is_symplectic(&form, &Ideal::exact()).map_err(text)? {
                return Err(format!(
                    "column completion at position {position} not symplectic"
                ));
            }
            let col: Vec<BigInt> = (0..4).map(|i| m.get(i, position - 1).clone()).collect();
            if col != row {
                return Err(format!("column {position} does not carry the input"));
            }
        }
        Ok("8 completions, all exactly symplectic".into())
    });

    run_item(&mut items, "seeded_shift_spotcheck", || {
        seeded_spotcheck(seed)
    });

    run_item(&mut items, "tampered_certificate_rejected", || {
        let m = IntMatrix::from_rows(vec![
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(3)],
        ])
        .map_err(text)?;
        let cert = sl_lift(&m, &ideal(5)?).map_err(text)?;
        let mut wire = CertificateJson::of(&cert);
        wire.output.entries[0][0].0 += 1;
        let (input, output, lambdas, names) = wire.to_parts().map_err(text)?;
        let checks = recheck(&input, &output, &lambdas, &names).map_err(text)?;
        match checks.iter().find(|c| !c.pass) {
            Some(c) => Ok(format!("tampered entry caught by '{}'", c.name)),
            None => Err("tampering went unnoticed".into()),
        }
    });

    let all_pass = items.iter().all(|i| i.status != "fail");
    let items: Vec<Value> = items
        .iter()
        .map(|i| {
            json!({
                "name": i.name,
                "status": i.status,
                "millis": i.millis,
                "detail": i.detail,
            })
        })
        .collect();
    Outcome {
        value: json!({"all_pass": all_pass, "seed": seed, "items": items}),
        exit: if all_pass { 0 } else { 1 },
    }
}

fn text(e: zlift::Error) -> String {
    e.to_string()
}

fn ideal(n: u64) -> Result<Ideal, String> {
    Ideal::from_u64(n).map_err(text)
}

fn weights(ws: &[u32]) -> Result<Weights, String> {
    Weights::new(ws.to_vec()).map_err(text)
}

fn expect_count(got: usize, want: usize) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("expected {want} classes, found {got}"))
    }
}

fn recheck_all(cert: &LiftCertificate) -> Result<(), String> {
    let names: Vec<String> = cert.checks().iter().map(|c| c.name.clone()).collect();
    let checks = recheck(cert.input(), cert.output(), cert.lambdas(), &names).map_err(text)?;
    match checks.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(format!("independent recheck failed '{}'", c.name)),
    }
}

fn lambda_list(cert: &LiftCertificate) -> String {
    cert.lambdas()
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// The four-factor product-space surjection target: all-ones classes over
/// four large primes with a full matrix of scaling exponents.
fn four_prime_points() -> Result<Vec<ProjPoint>, String> {
    let moduli = [241u64, 601, 1201, 1321];
    let weight_rows: [[u32; 4]; 4] = [
        [2, 5, 3, 10],
        [8, 20, 30, 24],
        [1, 50, 48, 40],
        [11, 55, 44, 22],
    ];
    moduli
        .iter()
        .zip(weight_rows)
        .map(|(n, ws)| {
            ProjPoint::new(vec![BigInt::one(); 4], ideal(*n)?, weights(&ws)?).map_err(text)
        })
        .collect()
}

fn seeded_spotcheck(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for round in 0..25 {
        let (entries, target) = loop {
            let len = rng.gen_range(2..=5);
            let entries: Vec<BigInt> = (0..len)
                .map(|_| BigInt::from(rng.gen_range(-40i64..=40)))
                .collect();
            let m = BigInt::from(rng.gen_range(2u64..=500));
            if gcd(&gcd_all(&entries), &m).is_one() {
                break (entries, Ideal::new(m).map_err(text)?);
            }
        };
        let w = usc_shift_mod(&entries, &target).map_err(text)?;
        if !w.verify(&entries, 0) || !is_unit_mod(&w.result, &target) {
            return Err(format!("head shift round {round} produced a bad witness"));
        }
    }

    let pool = [3u64, 5, 7, 11, 13, 17, 19, 23];
    for round in 0..25 {
        let mut primes = pool.to_vec();
        primes.shuffle(&mut rng);
        primes.truncate(rng.gen_range(2..=4));
        let moduli = primes
            .iter()
            .map(|&p| ideal(p))
            .collect::<Result<Vec<_>, String>>()?;
        let values: Vec<BigInt> = primes
            .iter()
            .map(|&p| BigInt::from(rng.gen_range(1..p)))
            .collect();
        let diag = diag_det_one(&values, &moduli).map_err(text)?;
        for ((d, v), n) in diag.iter().zip(&values).zip(&moduli) {
            if !n.contains(&(d - v)) {
                return Err(format!("diagonal round {round} broke a residue"));
            }
        }
        let product: BigInt = diag.iter().product();
        if !Ideal::product(&moduli).contains(&(product - BigInt::one())) {
            return Err(format!("diagonal round {round} has product != 1"));
        }
    }

    Ok(format!(
        "25 head shifts + 25 diagonal corrections verified (seed {seed})"
    ))
}
