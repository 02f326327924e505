use qverify_core::oracles::{run_oracle, OracleId};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let r = run_oracle(OracleId::CarlitzOpApply, 42);
    eprintln!("oracle: {:?} in {:?}", r.status, t0.elapsed());
}
