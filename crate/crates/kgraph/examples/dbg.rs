use kgraph::fixtures::*;
use kgraph::sampling;
use kgraph::equivalences::maps::SameSkeletonMap;
use std::sync::Arc;

fn main() {
    let g = Arc::new(tt2());
    let map = SameSkeletonMap::new(g.clone(), g.clone()).unwrap();
    for x in sampling::boundary_samples(&g, 0, 10) {
        println!("x prefix={:?} cycle={:?} deg={:?}", x.prefix, x.cycle, x.degree);
        match map.bp(&x) {
            Ok(_) => println!("  ok"),
            Err(e) => println!("  ERR {e:?}"),
        }
    }
}
