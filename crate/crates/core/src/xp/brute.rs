use crate::error::Result;
use crate::features::FeatureSet;
use crate::model::{Classifier, FeatureSpace, Instance};
use crate::oracle::brute::sufficiency_table;

/// All AXp's and CXp's of `v`'s prediction by exhaustive subset scan
/// (`m ≤ 20`) over the brute-force sufficiency table. Both lists are sorted.
pub fn brute_force_all_xps(
    model: &Classifier,
    space: &FeatureSpace,
    v: &Instance,
) -> Result<(Vec<FeatureSet>, Vec<FeatureSet>)> {
    let c = model.evaluate(space, v)?.class_id;
    let table = sufficiency_table(model, space, v, c)?;
    let m = space.len();
    let full: u32 = if m == 0 { 0 } else { (1u32 << m) - 1 };
    let to_set = |mask: u32| FeatureSet::from_ids(m, (0..m).filter(|i| mask & (1 << i) != 0));
    let members = |mask: u32| (0..m).filter(move |i| mask & (1 << i) != 0);

    let mut axps = Vec::new();
    let mut cxps = Vec::new();
    for mask in 0..=full {
        let suff = |s: u32| table[s as usize];
        if suff(mask) && members(mask).all(|i| !suff(mask & !(1 << i))) {
            axps.push(to_set(mask));
        }
        let flips = |y: u32| !suff(full & !y);
        if flips(mask) && members(mask).all(|i| !flips(mask & !(1 << i))) {
            cxps.push(to_set(mask));
        }
    }
    axps.sort();
    cxps.sort();
    Ok((axps, cxps))
}
