//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use k3div_core::catalog::{
    formula_ledger, impossibility_sigma10, n12_basechange_certificate, negative_control,
    picard_rows, realizability_matrix, verify_row, CellStatus, Evidence, Relation,
};
use k3div_core::field::{Gf2k, Poly};
use k3div_core::lattice::{
    build_lattice, discriminant_form, half_class_q_test, is_two_divisible, IntegerLattice,
    TwoDivisibility,
};
use k3div_core::qe::{
    analyze, height_ledger, ito_sigma, parity_divisibility, FiberType, PicardModel, QeError,
    SectionKind, WeierstrassQE,
};
use k3div_core::singularity::{
    classify, jacobian_colength, normal_forms, random_variant, BiSeries, Colength,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

/// Lattices built during the run, checked against Milgram's formula in the
/// sweep criterion.
#[derive(Default)]
struct Registry {
    lattices: Vec<(String, IntegerLattice)>,
}

impl Registry {
    fn add(&mut self, name: impl Into<String>, l: &IntegerLattice) {
        self.lattices.push((name.into(), l.clone()));
    }
}

fn picard_lattice_rows(reg: &mut Registry) -> Outcome {
    let mut lines = 0;
    for row in picard_rows() {
        let rep = verify_row(&row);
        ensure!(rep.passed, "sigma = {}: {:?}", row.sigma, rep.failures);
        for d in &row.decompositions {
            reg.add(
                d.clone(),
                &build_lattice(d).map_err(|e| e.to_string())?.lattice,
            );
            lines += 1;
        }
    }
    let neg = verify_row(&negative_control());
    ensure!(!neg.passed, "negative control passed");
    ensure!(
        neg.decompositions[0].length == 18,
        "negative control length {}",
        neg.decompositions[0].length
    );
    Ok(format!(
        "10 rows, {lines} decompositions; negative control rejected (length 18 != 20)"
    ))
}

fn matrix() -> Outcome {
    let m = realizability_matrix().map_err(|e| e.to_string())?;
    ensure!(m.cells.len() == 40, "{} cells", m.cells.len());
    ensure!(
        m.impossible() == vec![(8, 10), (16, 10), (20, 1)],
        "impossible cells {:?}",
        m.impossible()
    );
    ensure!(
        m.cell(20, 1).unwrap().status == CellStatus::ImpossibleExternal,
        "(20,1) not labeled external"
    );
    for c in &m.cells {
        ensure!(c.verified(), "cell ({}, {}) unverified", c.n, c.sigma);
        if c.status == CellStatus::Realizable {
            ensure!(
                matches!(c.evidence, Evidence::Witness(_)),
                "cell ({}, {}) lacks a witness",
                c.n,
                c.sigma
            );
        }
    }
    Ok("impossible exactly at (8,10), (16,10), (20,1) [external]; 37 witnesses verified".into())
}

fn traces() -> Outcome {
    for (n, sig) in [(8, "(1,13)"), (16, "(1,5)")] {
        let t = impossibility_sigma10(n).map_err(|e| e.to_string())?;
        ensure!(t.verified, "n = {n}: trace not verified");
        let a = &t.steps[0];
        let failed = a
            .checks
            .iter()
            .find(|c| c.statement.contains(sig) && c.statement.contains("exists"));
        ensure!(
            failed.is_some_and(|c| c.lhs == 0),
            "n = {n}: no failed unimodular check at {sig}"
        );
        let mod8 = a
            .checks
            .iter()
            .find(|c| c.relation == Relation::Ne)
            .unwrap();
        ensure!(mod8.lhs == 4, "n = {n}: p - q mod 8 = {}", mod8.lhs);
        for step in &t.steps {
            for c in &step.checks {
                let again = match c.relation {
                    Relation::Lt => c.lhs < c.rhs,
                    Relation::Eq => c.lhs == c.rhs,
                    Relation::Ne => c.lhs != c.rhs,
                };
                ensure!(again, "n = {n}: {} fails", c.statement);
            }
        }
    }
    ensure!(impossibility_sigma10(12).is_err(), "n = 12 accepted");
    Ok("(a) fails at (1,13) and (1,5); all glue and length inequalities re-checked".into())
}

fn half_class(reg: &mut Registry) -> Outcome {
    let l = build_lattice("A1^12").map_err(|e| e.to_string())?.lattice;
    reg.add("A1^12", &l);
    let d = l.class_i64(&[1; 12]).map_err(|e| e.to_string())?;
    ensure!(d.self_int == BigInt::from(-24), "D^2 = {}", d.self_int);
    let t = half_class_q_test(&l, &d).map_err(|e| e.to_string())?;
    ensure!(t.in_dual, "D/2 not in the dual");
    ensure!(
        t.q_value == Some(BigRational::from_integer(0.into())),
        "q = {:?}",
        t.q_value
    );
    let d4 = build_lattice("D4").map_err(|e| e.to_string())?.lattice;
    reg.add("D4", &d4);
    let f = discriminant_form(&d4);
    ensure!(f.order == BigInt::from(4), "|A_D4| = {}", f.order);
    for c in [[1, 0], [0, 1], [1, 1]] {
        let c: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        ensure!(
            f.q_of(&c) == BigRational::from_integer(1.into()),
            "q({c:?}) = {}",
            f.q_of(&c)
        );
    }
    Ok("D^2 = -24 gives q(D/2) = 0 mod 2; q = 1 on the three nonzero elements of A_D4".into())
}

fn twenty_iii(reg: &mut Registry) -> Outcome {
    let start = Instant::now();
    let w = WeierstrassQE::parse("gf2", "1", "0", "t^5+t^2+1").map_err(|e| e.to_string())?;
    let delta = w.discriminant();
    ensure!(delta.to_string() == "t^20+t^8+t+1", "Delta = {delta}");
    ensure!(
        delta.gcd(&delta.derivative()).is_one(),
        "Delta not squarefree"
    );
    let prof = w.valuation_profile().map_err(|e| e.to_string())?;
    let n_iii: usize = prof
        .iter()
        .filter(|f| f.fiber_type == FiberType::III)
        .map(|f| f.geometric_count)
        .sum();
    ensure!(
        n_iii == 20 && prof.iter().all(|f| f.fiber_type == FiberType::III),
        "profile {prof:?}"
    );
    ensure!(
        ito_sigma(0, 1).map_err(|e| e.to_string())? == 9,
        "sigma != 9"
    );
    let ledger = height_ledger(&w).map_err(|e| e.to_string())?;
    ensure!(
        ledger.display() == "0 = 4 + 6 - 10",
        "ledger {}",
        ledger.display()
    );
    let model = PicardModel::build(0, 0, SectionKind::Section).map_err(|e| e.to_string())?;
    reg.add("model l=0", model.lattice());
    let mut sum_c = model.zero();
    for j in 1..=20 {
        for (s, x) in sum_c
            .iter_mut()
            .zip(model.basis_vector(&format!("C{j}")).unwrap())
        {
            *s += x;
        }
    }
    let coords = model
        .generated()
        .coordinates(&sum_c)
        .ok_or("sum C not in the lattice")?;
    let class = model.lattice().class(coords).map_err(|e| e.to_string())?;
    let div = is_two_divisible(model.lattice(), &class).map_err(|e| e.to_string())?;
    ensure!(
        matches!(div, TwoDivisibility::Divisible { .. }),
        "sum C not divisible"
    );
    ensure!(model.rank() == 22, "model rank {}", model.rank());
    let report = analyze(&w).map_err(|e| e.to_string())?;
    ensure!(
        report.certificates.iter().any(|c| c.n == 20 && c.verified),
        "no n=20 certificate"
    );
    let ms = start.elapsed().as_millis();
    ensure!(ms < 1000, "took {ms} ms");
    Ok(format!("Delta = t^20+t^8+t+1 squarefree, 20 III, sigma 9, 0 = 4 + 6 - 10, sum C divisible ({ms} ms)"))
}

fn one_i0star() -> Outcome {
    let w = WeierstrassQE::parse("gf2", "t", "0", "t^5+t^4+t").map_err(|e| e.to_string())?;
    let prof = w.valuation_profile().map_err(|e| e.to_string())?;
    let count = |ty| {
        prof.iter()
            .filter(|f| f.fiber_type == ty)
            .map(|f| f.geometric_count)
            .sum::<usize>()
    };
    ensure!(
        count(FiberType::I0Star) == 1 && count(FiberType::III) == 16,
        "profile {prof:?}"
    );
    ensure!(
        w.intersection_po().map_err(|e| e.to_string())? == 2,
        "(P.O) != 2"
    );
    let ledger = height_ledger(&w).map_err(|e| e.to_string())?;
    ensure!(
        ledger.display() == "0 = 4 + 4 - 8",
        "ledger {}",
        ledger.display()
    );
    let report = analyze(&w).map_err(|e| e.to_string())?;
    let ns: Vec<usize> = report
        .certificates
        .iter()
        .filter(|c| c.verified)
        .map(|c| c.n)
        .collect();
    ensure!(ns == vec![16, 20], "certificates {ns:?}");
    ensure!(
        report.certificates[1].name.contains("C1'"),
        "n=20 certificate {}",
        report.certificates[1].name
    );
    Ok("1 I0* + 16 III, (P.O) = 2, 0 = 4 + 4 - 8, certificates n = 16 and n = 20 pass".into())
}

fn five_i0star() -> Outcome {
    let w = WeierstrassQE::parse("gf2", "0", "t", "t^5+t^2+1").map_err(|e| e.to_string())?;
    let root = w
        .discriminant_fourth_root()
        .ok_or("Delta is not a fourth power")?;
    ensure!(root == w.psi, "fourth root {root} != psi");
    let report = analyze(&w).map_err(|e| e.to_string())?;
    ensure!(
        report.discriminant_fourth_root.is_some(),
        "report omits the fourth root"
    );
    let count: usize = report
        .fibers
        .iter()
        .filter(|f| f.fiber_type == FiberType::I0Star)
        .map(|f| f.geometric_count)
        .sum();
    ensure!(
        count == 5
            && report
                .fibers
                .iter()
                .all(|f| f.fiber_type == FiberType::I0Star),
        "fibers"
    );
    let bad = WeierstrassQE::parse("gf2", "0", "t", "t^5+t^3+t^2").map_err(|e| e.to_string())?;
    match bad.valuation_profile() {
        Err(QeError::OutsideScope { valuation, .. }) => {
            ensure!(valuation == 8, "valuation {valuation}")
        }
        other => return Err(format!("non-squarefree psi accepted: {other:?}")),
    }
    Ok("Delta = psi^4, 5 geometric I0*; psi = t^2 (t^3 + t + 1) rejected with v = 8".into())
}

fn singularities() -> Outcome {
    let expected = [
        ("A1", 1),
        ("D4^0", 4),
        ("D6^0", 6),
        ("E7^0", 7),
        ("D8^0", 8),
        ("E8^0", 8),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let fields = [
        Gf2k::gf2(),
        Gf2k::with_default_modulus(2).unwrap(),
        Gf2k::with_default_modulus(3).unwrap(),
    ];
    for ((ty, text), (name, mu)) in normal_forms().iter().zip(expected) {
        let f = BiSeries::parse(text, Gf2k::gf2()).map_err(|e| e.to_string())?;
        let v = classify(&f);
        ensure!(
            v.kind.name() == name && v.colength == Colength::Exact(mu),
            "{text}: {} {}",
            v.kind.name(),
            v.colength
        );
        ensure!(v.kind == *ty, "{text}: type {:?}", v.kind);
        for i in 0..1000 {
            let field = fields[i % fields.len()];
            let g = BiSeries::parse(text, field).map_err(|e| e.to_string())?;
            let h = random_variant(&g, &mut rng);
            let v = classify(&h);
            let c = jacobian_colength(&h);
            ensure!(
                v.kind == *ty && c == Colength::Exact(mu) && v.colength == c,
                "{text} variant {h}: {} {c}",
                v.kind.name()
            );
        }
    }
    Ok(
        "six normal forms (A1,1) (D4^0,4) (D6^0,6) (E7^0,7) (D8^0,8) (E8^0,8); 6000 variants agree"
            .into(),
    )
}

fn parity(reg: &mut Registry) -> Outcome {
    let mut cases = 0;
    for kind in [SectionKind::Section, SectionKind::TwoSection] {
        let model = PicardModel::build(0, 0, kind).map_err(|e| e.to_string())?;
        ensure!(model.rank() == 22, "rank {}", model.rank());
        reg.add(format!("model l=0 {kind}"), model.lattice());
        for m in 0..=20 {
            let v = model.swapped_sum(m);
            let coords = model
                .generated()
                .coordinates(&v)
                .ok_or("not a lattice vector")?;
            let class = model.lattice().class(coords).map_err(|e| e.to_string())?;
            let brute = is_two_divisible(model.lattice(), &class)
                .map_err(|e| e.to_string())?
                .is_divisible();
            let rule = parity_divisibility(m, kind).map_err(|e| e.to_string())?;
            ensure!(
                brute == rule,
                "m = {m}, {kind}: lattice {brute}, rule {rule}"
            );
            cases += 1;
        }
    }
    Ok(format!("{cases} cases agree"))
}

fn random_poly<R: Rng>(field: Gf2k, max_deg: usize, rng: &mut R) -> Poly {
    Poly::new(
        field,
        (0..=max_deg)
            .map(|_| rng.gen_range(0..field.order()))
            .collect(),
    )
}

fn milgram_holds(l: &IntegerLattice) -> Option<bool> {
    let (p, q) = l.signature();
    let g = discriminant_form(l).gauss_signature?;
    Some(g.value as i64 == (p as i64 - q as i64).rem_euclid(8))
}

fn sweeps(reg: &mut Registry) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b33);
    let fields = [
        Gf2k::gf2(),
        Gf2k::with_default_modulus(2).unwrap(),
        Gf2k::with_default_modulus(3).unwrap(),
    ];
    let (mut accepted, mut attempts, mut analyzed) = (0usize, 0usize, 0usize);
    while accepted < 10_000 {
        attempts += 1;
        ensure!(attempts < 2_000_000, "only {accepted} accepted inputs");
        let field = fields[attempts % fields.len()];
        let phi = if rng.gen_ratio(1, 5) {
            Poly::zero(field)
        } else {
            random_poly(field, 3, &mut rng)
        };
        let w = WeierstrassQE::new(
            phi,
            random_poly(field, 3, &mut rng),
            random_poly(field, 5, &mut rng),
        );
        if !w.is_k3().ok {
            continue;
        }
        let Ok(prof) = w.valuation_profile() else {
            continue;
        };
        accepted += 1;
        let total: usize = prof
            .iter()
            .map(|f| f.place.degree() * f.valuation as usize)
            .sum();
        ensure!(total == 20, "{w:?}: sum deg * v = {total}");
        // the full report builds a rank-22 model; sample it
        if accepted % 50 != 0 {
            continue;
        }
        match analyze(&w) {
            Ok(_) => analyzed += 1,
            Err(QeError::InvalidConfiguration(_)) => {}
            Err(e) => return Err(format!("{w:?}: {e}")),
        }
    }

    // registered lattices, the Picard models, base change lattices and
    // small random even lattices
    for ell in [0, 1, 2, 3, 5] {
        let m = PicardModel::build(ell, ell, SectionKind::Section).map_err(|e| e.to_string())?;
        reg.add(format!("model l={ell}"), m.lattice());
        for k in 0..=ell {
            if let Ok(m) = PicardModel::build(ell, k, SectionKind::TwoSection) {
                reg.add(format!("model l={ell} k={k} two_section"), m.lattice());
            }
        }
    }
    for r in 1..=9 {
        let c = n12_basechange_certificate(r).map_err(|e| e.to_string())?;
        reg.add(format!("base change r={r}"), &c.lattice);
    }
    for spec in [
        "U", "U(2)", "E8(2)", "~A1^8", "~A1^16", "~A1^20", "A5", "D6", "E6", "E7", "A1^12",
    ] {
        reg.add(
            spec,
            &build_lattice(spec).map_err(|e| e.to_string())?.lattice,
        );
    }
    let mut random = 0;
    while random < 200 {
        let n = rng.gen_range(1..=4);
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * rng.gen_range(-3..=3);
            for j in 0..i {
                let x = rng.gen_range(-3..=3);
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        if let Ok(l) = IntegerLattice::from_i64(&g) {
            reg.add(format!("random {g:?}"), &l);
            random += 1;
        }
    }
    let mut checked = 0;
    for (name, l) in &reg.lattices {
        match milgram_holds(l) {
            Some(true) => checked += 1,
            Some(false) => return Err(format!("Milgram fails for {name}")),
            None => return Err(format!("no Gauss signature for {name}")),
        }
    }
    Ok(format!(
        "{accepted} inputs ({attempts} drawn, {analyzed} fully analyzed), sum deg * v = 20 throughout; Milgram on {checked} lattices"
    ))
}

fn ledger() -> Outcome {
    let rows: Vec<String> = [8, 12, 16, 20]
        .iter()
        .map(|&n| formula_ledger(n).map(|l| l.row()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure!(
        rows == ["(2,8,-,0)", "(1,0,0,1)", "(0,-,2,2)", "(-1,-,4,3)"],
        "rows {rows:?}"
    );
    let l12 = formula_ledger(12).unwrap();
    ensure!(l12.cases.len() == 2, "n = 12 should admit both cases");
    let err = formula_ledger(4).err().ok_or("n = 4 accepted")?.to_string();
    ensure!(err.contains("8, 12, 16 or 20"), "error {err}");
    Ok(format!("{}; n = 4 rejected", rows.join(" ")))
}

fn main() {
    let mut reg = Registry::default();
    let criteria: Vec<(&str, Box<dyn FnMut(&mut Registry) -> Outcome>)> = vec![
        ("Picard lattice rows", Box::new(picard_lattice_rows)),
        ("realizability matrix", Box::new(|_| matrix())),
        ("sigma = 10 impossibility traces", Box::new(|_| traces())),
        (
            "half-class and D4 discriminant values",
            Box::new(half_class),
        ),
        ("20 III pipeline", Box::new(twenty_iii)),
        ("1 I0* + 16 III instance", Box::new(|_| one_i0star())),
        ("phi = 0 gives 5 I0*", Box::new(|_| five_i0star())),
        (
            "singularity table and variants",
            Box::new(|_| singularities()),
        ),
        ("parity oracle", Box::new(parity)),
        ("Weierstrass sweep and Milgram", Box::new(sweeps)),
        ("formula ledger", Box::new(|_| ledger())),
    ];
    let mut failed = 0;
    for (i, (name, mut f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(|| f(&mut reg)))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {:>2}. {name}: {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {msg} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
