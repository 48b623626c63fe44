use hsdepth::datasets::gen_gaussian;
use hsdepth::median::{max_depth, Strategy};
use hsdepth::region::{depth_region, region_centroid};
use std::time::Instant;

fn main() {
    let named = gen_gaussian(30, 4, 18).unwrap();
    let c = &named.cloud;
    let md = max_depth(c, Strategy::Thm1).unwrap();
    let t = Instant::now();
    let r = depth_region(c, md.kappa_star).unwrap();
    println!("region: {:?} verts={}", t.elapsed(), r.vertices.len());
    let t = Instant::now();
    let _ = region_centroid(&r).unwrap();
    println!("centroid: {:?}", t.elapsed());
}
