//! Finite unions of closed intervals: canonical form, intersection, measure.

use regen_stable::interval_sets::IntervalSet;

fn main() -> regen_stable::Result<()> {
    let a = IntervalSet::from_pairs(&[[0.0, 0.3], [0.25, 0.5], [0.8, 1.0]], 1.0)?;
    let b = IntervalSet::from_pairs(&[[0.1, 0.2], [0.4, 0.9]], 1.0)?;
    println!("a          = {:?}", a.to_pairs());
    println!("b          = {:?}", b.to_pairs());
    let ab = a.intersect(&b)?;
    println!("a & b      = {:?}  measure {:.3}", ab.to_pairs(), ab.measure());
    println!("complement = {:?}", a.complement().to_pairs());
    println!("a shifted  = {:?}", a.shift(0.15)?.to_pairs());
    println!("a dilated  = {:?}", a.dilate(0.05)?.to_pairs());
    println!("|a| on [0, 0.4] = {:.3}", a.measure_upto(0.4)?);

    let json = ab.to_json();
    let back = IntervalSet::from_json(&json, 1.0)?;
    assert_eq!(back, ab);
    println!("json: {json}");
    Ok(())
}
