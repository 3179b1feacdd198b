use std::collections::HashSet;
use std::time::Instant;

use schurlab::sequence::{exponents, fractal_check, generate, genfun_check, occupancy};

/// Greedy construction: take each integer in turn unless its half was taken.
fn greedy(count: usize) -> Vec<u64> {
    let mut taken = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let mut c = 0u64;
    while out.len() < count {
        c += 1;
        if c.is_multiple_of(2) && taken.contains(&(c / 2)) {
            continue;
        }
        taken.insert(c);
        out.push(c);
    }
    out
}

#[test]
fn first_fourteen_terms() {
    assert_eq!(generate(14).terms(), [1, 3, 4, 5, 7, 9, 11, 12, 13, 15, 16, 17, 19, 20]);
}

#[test]
fn matches_greedy_oracle_for_a_million_terms() {
    let start = Instant::now();
    let state = generate(1_000_000);
    assert!(start.elapsed().as_secs_f64() < 10.0);
    assert_eq!(state.terms(), greedy(1_000_000).as_slice());
}

#[test]
fn terms_are_integers_with_even_two_adic_valuation() {
    let state = generate(100_000);
    for x in 1..=state.last() {
        assert_eq!(state.contains(x), x.trailing_zeros() % 2 == 0, "{x}");
    }
}

#[test]
fn no_term_doubles_another_and_gaps_are_one_or_two() {
    let state = generate(200_000);
    for &t in state.terms() {
        if 2 * t <= state.last() {
            assert!(!state.contains(2 * t), "{t}");
        }
    }
    assert!(state.terms().windows(2).all(|w| matches!(w[1] - w[0], 1 | 2)));
}

#[test]
fn fractal_holds_at_a_hundred_thousand_terms() {
    let report = fractal_check(&generate(100_000)).unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn generating_function_matches_up_to_twelve_exponents() {
    let state = generate(20_000);
    for e in 1..=12 {
        let report = genfun_check(&state, e).unwrap();
        assert!(report.mismatches.is_empty(), "E = {e}: {:?}", &report.mismatches[..1]);
        assert_eq!(report.valid_orders as u64, exponents(e + 1).unwrap()[e]);
    }
}

#[test]
fn exponents_are_jacobsthal_numbers() {
    let e = exponents(20).unwrap();
    // J(n) = (2^n - (-1)^n) / 3, starting from J(1) = 1.
    for (i, &x) in e.iter().enumerate() {
        let n = i as u32 + 1;
        let j = (2i64.pow(n) - if n.is_multiple_of(2) { 1 } else { -1 }) / 3;
        assert_eq!(x as i64, j);
    }
}

#[test]
fn occupancy_string() {
    assert_eq!(occupancy(&generate(14), 12).unwrap(), "101110101011");
}
