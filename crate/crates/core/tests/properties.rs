//! Randomized structural properties of the sequence maps: bijectivity,
//! shift compatibility, and twist reversibility.

use proptest::prelude::*;

use weyl_symbols::series::{Kind, Series, Tables};
use weyl_symbols::structure::{u_blocks, IsoLabeling};
use weyl_symbols::symbols::Seq;

fn series_strategy() -> impl Strategy<Value = Series> {
    prop_oneof![Just(Series::B), Just(Series::C), Just(Series::D)]
}

fn kind_strategy() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Symbol), Just(Kind::USymbol)]
}

fn pick(tables: &Tables, series: Series, kind: Kind, n: u32, index: prop::sample::Index) -> Seq {
    let seqs = tables
        .enumerate(series, kind, n)
        .expect("standard tables stabilize at desk ranks");
    seqs[index.index(seqs.len())].clone()
}

proptest! {
    #[test]
    fn the_symbol_bijection_round_trips_in_both_directions(
        series in series_strategy(),
        n in 0u32..=4,
        index in any::<prop::sample::Index>(),
    ) {
        let tables = Tables::standard();
        let u = pick(&tables, series, Kind::USymbol, n, index);
        let image = tables.i_bijection(&u).expect("valid image");
        prop_assert_eq!(tables.i_inverse(&image).expect("valid preimage"), u);

        let s = pick(&tables, series, Kind::Symbol, n, index);
        let preimage = tables.i_inverse(&s).expect("valid preimage");
        prop_assert_eq!(tables.i_bijection(&preimage).expect("valid image"), s);
    }

    #[test]
    fn the_symbol_bijection_commutes_with_the_level_shift(
        series in series_strategy(),
        n in 0u32..=4,
        index in any::<prop::sample::Index>(),
    ) {
        let tables = Tables::standard();
        let u = pick(&tables, series, Kind::USymbol, n, index);
        let shifted_then_mapped = tables
            .i_bijection(&tables.shift(&u).expect("shift is valid"))
            .expect("valid image");
        let mapped_then_shifted = tables
            .shift(&tables.i_bijection(&u).expect("valid image"))
            .expect("shift is valid");
        prop_assert_eq!(shifted_then_mapped, mapped_then_shifted);
    }

    #[test]
    fn unshift_inverts_the_level_shift(
        series in series_strategy(),
        kind in kind_strategy(),
        n in 0u32..=4,
        index in any::<prop::sample::Index>(),
    ) {
        let tables = Tables::standard();
        let s = pick(&tables, series, kind, n, index);
        let shifted = tables.shift(&s).expect("shift is valid");
        prop_assert_eq!(tables.unshift(&shifted), Some(s));
    }

    #[test]
    fn the_minimal_form_is_a_fixed_point_and_ignores_shifts(
        series in series_strategy(),
        kind in kind_strategy(),
        n in 0u32..=4,
        index in any::<prop::sample::Index>(),
    ) {
        let tables = Tables::standard();
        let s = pick(&tables, series, kind, n, index);
        let minimal = tables.minimal_form(&s);
        prop_assert_eq!(tables.minimal_form(&minimal), minimal.clone());
        let shifted = tables.shift(&s).expect("shift is valid");
        prop_assert_eq!(tables.minimal_form(&shifted), minimal);
    }

    #[test]
    fn twisting_the_moved_values_back_restores_a_distinguished_u_symbol(
        series in series_strategy(),
        n in 0u32..=4,
        index in any::<prop::sample::Index>(),
        mask in any::<u64>(),
    ) {
        let tables = Tables::standard();
        let seqs = tables
            .enumerate(series, Kind::USymbol, n)
            .expect("standard tables stabilize at desk ranks");
        let distinguished: Vec<&Seq> =
            seqs.iter().filter(|s| s.is_nondecreasing()).collect();
        let u = distinguished[index.index(distinguished.len())].clone();

        let len = u.entries().len();
        let mu: Vec<usize> = (0..len).filter(|i| mask >> i & 1 == 1).collect();
        let twisted = match tables.twist(&u, &mu) {
            Ok(Some(t)) => t,
            // Undefined twist or a repeated selected value: nothing to invert.
            Ok(None) | Err(_) => return Ok(()),
        };

        let moved: Vec<u32> = mu.iter().map(|&i| u.entries()[i]).collect();
        let back: Vec<usize> = twisted
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, v)| moved.contains(v))
            .map(|(i, _)| i)
            .collect();
        prop_assert_eq!(tables.twist(&twisted, &back), Ok(Some(u)));
    }

    #[test]
    fn block_label_sums_respect_symmetric_difference(
        series in series_strategy(),
        n in 0u32..=4,
        index in any::<prop::sample::Index>(),
        first in any::<u64>(),
        second in any::<u64>(),
    ) {
        let tables = Tables::standard();
        let seqs = tables
            .enumerate(series, Kind::USymbol, n)
            .expect("standard tables stabilize at desk ranks");
        let distinguished: Vec<&Seq> =
            seqs.iter().filter(|s| s.is_nondecreasing()).collect();
        let canonical = distinguished[index.index(distinguished.len())].clone();

        let decomp = u_blocks(&tables, &canonical).expect("valid block structure");
        let image = tables.i_bijection(&canonical).expect("valid image");
        let mut special_entries = image.entries().to_vec();
        special_entries.sort_unstable();
        let special = tables
            .validate(series, Kind::Symbol, image.n(), image.m(), special_entries)
            .expect("sorted image is a valid symbol");
        let labeling = IsoLabeling::from_special(&tables, &special).expect("valid labeling");
        let points = labeling.points_of(&image).expect("valid points");

        let blocks = &decomp.blocks;
        let full = match blocks.len() {
            0 => 0,
            count => (1u64 << count) - 1,
        };
        let x = first & full;
        let y = second & full;
        prop_assert_eq!(
            points.m_of_set(blocks, x ^ y),
            points.m_of_set(blocks, x) ^ points.m_of_set(blocks, y)
        );
        prop_assert_eq!(
            points.lambda_of_set(blocks, x ^ y),
            points.lambda_of_set(blocks, x) ^ points.lambda_of_set(blocks, y)
        );
    }
}
