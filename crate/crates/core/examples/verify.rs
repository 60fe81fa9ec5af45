//! Run the identity battery in-process.
use twistlab::ecurve::{build_curve, TraceCache};
use twistlab::verify::run_suites;
use twistlab::Poly;

fn main() -> twistlab::Result<()> {
    let curve = build_curve(Poly::parse(5, "0,1")?, Poly::parse(5, "1")?)?;
    let dir = std::env::temp_dir().join("twistlab-example-cache");
    for r in run_suites(&TraceCache::new(curve), &dir, &[]) {
        println!(
            "{:<11} {} {}",
            r.suite,
            if r.passed { "ok  " } else { "FAIL" },
            r.detail
        );
    }
    Ok(())
}
