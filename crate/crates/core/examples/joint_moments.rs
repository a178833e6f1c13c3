//! Joint moments of overlapping intersection local times, three ways.

use regen_stable::moments::{
    closed_increment_moment, joint_moment, psi_averaged_moment, psi_conditional, IntegrationBudget, MomentSpec,
};

fn main() -> regen_stable::Result<()> {
    let budget = IntegrationBudget::default();

    let equal = MomentSpec::new(0.75, 2, vec![vec![1, 2], vec![1, 2]], vec![1.0, 1.0])?;
    let est = joint_moment(&equal, &budget)?;
    println!("E L^2, I1 = I2         : {:.6} ({:?})", est.value, est.method);
    println!("closed form            : {:.6}", closed_increment_moment(0.75, 2, 2, 0.0, 1.0)?);

    let overlap = MomentSpec::new(0.75, 2, vec![vec![1, 2], vec![2, 3]], vec![1.0, 1.0])?;
    let q = joint_moment(&overlap, &budget)?;
    println!("I1=(1,2), I2=(2,3)     : {:.6} +- {:.6} (partial: {})", q.value, q.std_error, q.partial);
    let avg = psi_averaged_moment(&overlap, &budget)?;
    println!("shift-averaged Psi     : {:.6} +- {:.6}", avg.value, avg.std_error);

    let psi = psi_conditional(&overlap, &[0.1, 0.3, 0.2], &budget)?;
    println!("Psi(0.1, 0.3, 0.2)     : {:.6} +- {:.6}", psi.value, psi.std_error);
    Ok(())
}
