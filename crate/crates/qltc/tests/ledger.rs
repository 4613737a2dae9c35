use qltc::weightred::{
    all_evaluated_pass, echo_ledger, measure_wr_stages, parameter_ledger, weight_reduce_full,
    LedgerConstants, ReduceOptions, RowStatus,
};
use qltc::css::{measure, MeasureOptions};
use qltc::zoo::{cross_code, repetition_pcm, surface_code};

const BUDGET: u32 = 24;

#[test]
fn surface_three_ledger_all_evaluated_rows_pass() {
    let code = surface_code(3).unwrap();
    let red = weight_reduce_full(&code, &ReduceOptions::default()).unwrap();
    let stages = measure_wr_stages(&code, &red, BUDGET).unwrap();
    let rows = parameter_ledger(&stages, &LedgerConstants::fitted());
    let mut evaluated = 0;
    let mut skipped = 0;
    for row in &rows {
        println!("{row}");
        match &row.status {
            RowStatus::Pass => evaluated += 1,
            RowStatus::Fail => {}
            RowStatus::Skipped { .. } => skipped += 1,
            RowStatus::Unevaluated { missing } => panic!("missing constant {missing}"),
        }
    }
    assert!(all_evaluated_pass(&rows), "some evaluated ledger rows failed");
    // The structural recursions must all be checkable at this size.
    assert!(evaluated >= 50, "only {evaluated} rows evaluated");
    println!("{evaluated} evaluated, {skipped} skipped of {}", rows.len());
}

#[test]
fn cross_code_ledger_reaches_deep_soundness_rows() {
    // Small enough that soundness stays within budget through the
    // thickening stage.
    let code = cross_code(&repetition_pcm(3).unwrap()).unwrap();
    let red = weight_reduce_full(&code, &ReduceOptions::default()).unwrap();
    let stages = measure_wr_stages(&code, &red, BUDGET).unwrap();
    let rows = parameter_ledger(&stages, &LedgerConstants::fitted());
    for row in &rows {
        println!("{row}");
    }
    assert!(all_evaluated_pass(&rows), "some evaluated ledger rows failed");
    let rho_evaluated = rows
        .iter()
        .filter(|r| {
            (r.table == "rho_z" || r.table == "rho_x") && r.status == RowStatus::Pass
        })
        .count();
    assert!(rho_evaluated >= 4, "only {rho_evaluated} soundness rows evaluated");
}

#[test]
fn missing_constants_flag_rows_unevaluated() {
    let code = cross_code(&repetition_pcm(3).unwrap()).unwrap();
    let red = weight_reduce_full(&code, &ReduceOptions::default()).unwrap();
    let stages = measure_wr_stages(&code, &red, BUDGET).unwrap();
    let rows = parameter_ledger(&stages, &LedgerConstants::default());
    assert!(rows
        .iter()
        .any(|r| matches!(r.status, RowStatus::Unevaluated { .. })));
    // Exact rows evaluate regardless.
    assert!(rows
        .iter()
        .any(|r| r.relation == "n(1) = n*q_x" && r.status == RowStatus::Pass));
    assert!(all_evaluated_pass(&rows));
}

#[test]
fn echo_ledger_reports_measured_params() {
    let code = surface_code(3).unwrap();
    let params = measure(&code, &MeasureOptions { distances: false, soundness: false, budget: BUDGET }).unwrap();
    let rows = echo_ledger(&[("surface3".to_string(), params)]);
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.status == RowStatus::Pass));
    assert!(rows.iter().any(|r| r.relation == "n" && r.measured == "13"));
}
