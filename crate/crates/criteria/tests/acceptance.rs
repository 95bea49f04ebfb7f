use std::process::ExitCode;

fn main() -> ExitCode {
    println!("acceptance criteria (tolerance {:e}, seed {})", qmink_criteria::TOL, qmink_criteria::SEED);
    let mut all = qmink_criteria::criteria();
    all.push(qmink_criteria::operator_grid());
    for outcome in &all {
        println!("{}", outcome.line());
    }
    let failed = all.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", all.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
