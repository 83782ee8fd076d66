//! dB and field-strength conversions. All internal math is linear scale.

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}

#[inline]
pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

/// Field amplitude in dB relative to 1 V/m.
#[inline]
pub fn dbvm_to_vpm(dbvm: f64) -> f64 {
    10f64.powf(dbvm / 20.0)
}

#[inline]
pub fn vpm_to_dbvm(v: f64) -> f64 {
    20.0 * v.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn db_round_trip(db in -200.0f64..200.0) {
            let back = linear_to_db(db_to_linear(db));
            prop_assert!((back - db).abs() <= 1e-12 * db.abs().max(1.0));
            let w = dbm_to_watts(db);
            prop_assert!(((watts_to_dbm(w) - db) / db.abs().max(1.0)).abs() <= 1e-12);
            let v = dbvm_to_vpm(db);
            prop_assert!(((vpm_to_dbvm(v) - db) / db.abs().max(1.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn reference_points() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((db_to_linear(40.0) - 1e4).abs() < 1e-9);
    }
}
