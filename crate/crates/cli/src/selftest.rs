//! Built-in oracle corpus: desk-checkable values the whole pipeline must
//! reproduce. One line per check; exit 0 only if everything passes.

use hmk_core::decomposition::{
    gauss_quadrature, jacobi_from_moments, strong_hankel_decompose, verify_decomposition,
    JacobiMatrix, DEFAULT_DECOMPOSE_TOL,
};
use hmk_core::psd::{hankel_matrix, psd_check, PsdVerdict, DEFAULT_PSD_TOL};
use hmk_core::scalar::{rat, ratio};
use hmk_core::sequence::{
    hilbert_vector, AtomicMeasure, GeneratingVector, MultiIndex, MultidimensionalSequence,
};
use hmk_core::tensor::{
    hankel_tensor, multinomial_coefficient, polynomial_eval_contraction, polynomial_eval_direct,
};
use num_rational::BigRational;

use crate::Failure;

type Check = (&'static str, fn() -> Result<(), String>);

fn expect<T: PartialEq + std::fmt::Debug>(label: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got:?}, want {want:?}"))
    }
}

fn expect_close(label: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{label}: got {got}, want {want} (tol {tol})"))
    }
}

fn gvf(values: &[f64]) -> GeneratingVector<f64> {
    GeneratingVector::new(values.to_vec()).expect("finite")
}

fn weighted_degrees() -> Result<(), String> {
    let j = MultiIndex::new(3, vec![2, 0]).map_err(|e| e.to_string())?;
    expect("weighted_degree (2,0)", j.weighted_degree(), 2)?;
    let j = MultiIndex::new(4, vec![1, 1, 1]).map_err(|e| e.to_string())?;
    expect("weighted_degree (1,1,1)", j.weighted_degree(), 6)
}

fn multinomials() -> Result<(), String> {
    let j = MultiIndex::new(2, vec![1]).map_err(|e| e.to_string())?;
    expect(
        "multinomial m=2 j=(1)",
        multinomial_coefficient(2, &j).map_err(|e| e.to_string())?,
        2,
    )?;
    let j = MultiIndex::new(3, vec![1, 1]).map_err(|e| e.to_string())?;
    expect(
        "multinomial m=3 j=(1,1)",
        multinomial_coefficient(3, &j).map_err(|e| e.to_string())?,
        6,
    )
}

fn evaluation_paths() -> Result<(), String> {
    let s = MultidimensionalSequence::from_generating_vector(gvf(&[1.0, 2.0, 5.0]), 2)
        .map_err(|e| e.to_string())?;
    let direct = polynomial_eval_direct(&s, 2, &[1.0, 1.0]).map_err(|e| e.to_string())?;
    let contracted = polynomial_eval_contraction(&s, 2, &[1.0, 1.0]).map_err(|e| e.to_string())?;
    expect("quadratic at (1,1), direct", direct, 10.0)?;
    expect("quadratic at (1,1), contraction", contracted, 10.0)?;

    let ones = GeneratingVector::new(vec![rat(1); 7]).map_err(|e| e.to_string())?;
    let s = MultidimensionalSequence::from_generating_vector(ones, 3).map_err(|e| e.to_string())?;
    let x = vec![rat(1), rat(1), rat(1)];
    let value = polynomial_eval_direct(&s, 3, &x).map_err(|e| e.to_string())?;
    expect("constant cubic at all-ones", value, rat(27))
}

fn hankel_tensor_entries() -> Result<(), String> {
    let h = hankel_tensor(gvf(&[0.0, 1.0, 2.0, 3.0, 4.0]), 3, 2).map_err(|e| e.to_string())?;
    for i in 0..3 {
        for j in 0..3 {
            expect(
                "hankel entry",
                h.entry(&[i, j]).map_err(|e| e.to_string())?,
                (i + j) as f64,
            )?;
        }
    }
    Ok(())
}

fn psd_verdicts() -> Result<(), String> {
    let id = hankel_matrix(&gvf(&[1.0, 0.0, 1.0]), 2).map_err(|e| e.to_string())?;
    let report = psd_check(&id, DEFAULT_PSD_TOL);
    expect("identity verdict", report.verdict, PsdVerdict::Psd)?;
    expect("identity rank", report.rank, 2)?;

    let values = vec![rat(1), rat(0), rat(-1)];
    let v = GeneratingVector::new(values).map_err(|e| e.to_string())?;
    let h = hankel_matrix(&v, 2).map_err(|e| e.to_string())?;
    let report = psd_check(&h, DEFAULT_PSD_TOL);
    expect("indefinite verdict", report.verdict, PsdVerdict::NotPsd)?;
    let witness = report.witness.ok_or("missing witness")?;
    let form = h.quadratic_form(&witness).map_err(|e| e.to_string())?;
    if form >= rat(0) {
        return Err(format!("witness does not re-verify: form = {form}"));
    }
    Ok(())
}

fn hilbert_certificate() -> Result<(), String> {
    let h = hankel_matrix(&hilbert_vector(4), 3).map_err(|e| e.to_string())?;
    let report = psd_check(&h, DEFAULT_PSD_TOL);
    expect("hilbert p=3 verdict", report.verdict, PsdVerdict::Psd)?;
    expect("hilbert p=3 rank", report.rank, 3)?;
    let det: BigRational = report
        .pivots
        .ok_or("missing pivots")?
        .into_iter()
        .fold(rat(1), |a, b| a * b);
    expect("hilbert p=3 determinant", det, ratio(1, 2160))
}

fn quadrature_two_point() -> Result<(), String> {
    let j = jacobi_from_moments(&gvf(&[2.0, 0.0, 2.0, 0.0]), 2, DEFAULT_PSD_TOL)
        .map_err(|e| e.to_string())?;
    expect("recurrence diag", j.diag().to_vec(), vec![0.0, 0.0])?;
    expect("recurrence offdiag", j.offdiag().to_vec(), vec![1.0])?;
    expect("recurrence mass", j.mass(), 2.0)?;
    let mu = gauss_quadrature(&j).map_err(|e| e.to_string())?;
    expect("atom count", mu.len(), 2)?;
    expect_close("node 0", mu.atoms()[0].0, -1.0, 1e-13)?;
    expect_close("node 1", mu.atoms()[1].0, 1.0, 1e-13)?;
    expect_close("weight 0", mu.atoms()[0].1, 1.0, 1e-13)?;
    expect_close("weight 1", mu.atoms()[1].1, 1.0, 1e-13)?;

    let single = JacobiMatrix::new(vec![1.0], vec![], 1.0).map_err(|e| e.to_string())?;
    let mu = gauss_quadrature(&single).map_err(|e| e.to_string())?;
    expect("dirac atoms", mu.atoms().to_vec(), vec![(1.0, 1.0)])
}

fn decompositions() -> Result<(), String> {
    // constant vector: a single Dirac at 1
    let tensor = hankel_tensor(gvf(&[1.0; 9]), 3, 4).map_err(|e| e.to_string())?;
    let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL)
        .map_err(|e| e.to_string())?;
    expect("constant: atom count", d.atoms.len(), 1)?;
    expect_close("constant: node", d.atoms.atoms()[0].0, 1.0, 1e-12)?;
    expect_close("constant: weight", d.atoms.atoms()[0].1, 1.0, 1e-12)?;
    expect_close("constant: augmented", d.augmented, 0.0, 1e-12)?;
    let report =
        verify_decomposition(&tensor, &d, DEFAULT_DECOMPOSE_TOL).map_err(|e| e.to_string())?;
    if !report.pass {
        return Err(format!("constant reconstruction failed: {report:?}"));
    }

    // top-degree-only vector: zero atoms plus augmented coefficient 1
    let tensor = hankel_tensor(gvf(&[0.0, 0.0, 1.0]), 2, 2).map_err(|e| e.to_string())?;
    let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL)
        .map_err(|e| e.to_string())?;
    expect("top-degree: atoms", d.atoms.len(), 0)?;
    expect("top-degree: augmented", d.augmented, 1.0)?;
    let report =
        verify_decomposition(&tensor, &d, DEFAULT_DECOMPOSE_TOL).map_err(|e| e.to_string())?;
    expect("top-degree: exact residual", report.max_abs, 0.0)?;

    // two atoms at -1 and 1
    let mu = AtomicMeasure::new(vec![(-1.0, 1.0), (1.0, 1.0)]).map_err(|e| e.to_string())?;
    let v = mu.moments(8);
    let tensor = hankel_tensor(v, 3, 4).map_err(|e| e.to_string())?;
    let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL)
        .map_err(|e| e.to_string())?;
    expect("two-atom: count", d.atoms.len(), 2)?;
    expect_close("two-atom: node 0", d.atoms.atoms()[0].0, -1.0, 1e-10)?;
    expect_close("two-atom: node 1", d.atoms.atoms()[1].0, 1.0, 1e-10)?;
    let report = verify_decomposition(&tensor, &d, 1e-10).map_err(|e| e.to_string())?;
    if !report.pass {
        return Err(format!("two-atom reconstruction failed: {report:?}"));
    }
    Ok(())
}

fn refusal_on_non_strong() -> Result<(), String> {
    let tensor =
        hankel_tensor(gvf(&[1.0, 0.0, -1.0, 0.0, 1.0]), 3, 2).map_err(|e| e.to_string())?;
    match strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL) {
        Err(hmk_core::Error::Precondition(_)) => Ok(()),
        other => Err(format!("expected precondition failure, got {other:?}")),
    }
}

pub fn run() -> Result<u8, Failure> {
    let checks: Vec<Check> = vec![
        ("weighted degrees", weighted_degrees),
        ("multinomial coefficients", multinomials),
        ("evaluation paths", evaluation_paths),
        ("hankel tensor entries", hankel_tensor_entries),
        ("psd verdicts and witnesses", psd_verdicts),
        ("hilbert exact certificate", hilbert_certificate),
        ("quadrature from moments", quadrature_two_point),
        ("strong hankel decompositions", decompositions),
        ("refusal on non-strong input", refusal_on_non_strong),
    ];
    let mut failures = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("[ ok ] {name}"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    if failures == 0 {
        println!("selftest: all checks passed");
        Ok(crate::EXIT_TRUE)
    } else {
        println!("selftest: {failures} check(s) failed");
        Ok(crate::EXIT_FALSE)
    }
}
