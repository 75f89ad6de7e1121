use std::io::Write;

use super::solver::Trajectory;

/// Writes `t,F,a,nijenhuis_sq,residual`, one row per sample.
pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "F", "a", "nijenhuis_sq", "residual"])?;
    for s in &traj.samples {
        w.write_record([s.t, s.f, s.a, s.nijenhuis_sq, s.residual].map(|x| format!("{x:?}")))?;
    }
    w.flush()?;
    Ok(())
}
