//! Triangle census and degree of balance on small signed graphs.
//!
//! Walks through the classic balanced/unbalanced triads, then shows the
//! trace-based and enumeration-based censuses agreeing on a larger random
//! graph.

use ridge::balance::{balance_degree, triangle_census, triangle_census_trace};
use ridge::graph::SignedGraph;
use ridge::ssbm::{ssbm_generate, SsbmConfig};

fn show(name: &str, g: &SignedGraph) {
    let c = triangle_census(g);
    match balance_degree(g) {
        Ok(d) => println!(
            "{name}: {} triangles, {} balanced -> D3 = {d:.4}",
            c.total, c.balanced
        ),
        Err(_) => println!("{name}: no triangles"),
    }
}

fn main() {
    // "The friend of my friend is my friend": all-positive triangle, balanced.
    let friends = SignedGraph::from_edge_list(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
    show("+++ triad", &friends);

    // "The foe of my foe is my friend": two negatives, one positive, balanced.
    let rivals = SignedGraph::from_edge_list(3, &[(0, 1, -1), (1, 2, -1), (0, 2, 1)]).unwrap();
    show("--+ triad", &rivals);

    // One negative edge among friends: unbalanced, D3 = 0.
    let tension = SignedGraph::from_edge_list(3, &[(0, 1, 1), (1, 2, 1), (0, 2, -1)]).unwrap();
    show("++- triad", &tension);

    // A two-community graph is highly balanced by construction; sign flips
    // erode D3.
    for flip in [0.0, 0.05, 0.2] {
        let g = ssbm_generate(&SsbmConfig {
            n: 120,
            k: 2,
            p: 0.15,
            rho: 1.0,
            sign_flip: flip,
            seed: 7,
        })
        .unwrap()
        .graph;
        show(&format!("two communities, {:>2.0}% flipped", flip * 100.0), &g);
    }

    // The O(m^(3/2)) enumeration and the O(n * nnz) trace computation count
    // the same triangles.
    let g = ssbm_generate(&SsbmConfig {
        n: 150,
        k: 3,
        p: 0.1,
        rho: 1.3,
        sign_flip: 0.1,
        seed: 42,
    })
    .unwrap()
    .graph;
    let by_enum = triangle_census(&g);
    let by_trace = triangle_census_trace(&g);
    assert_eq!(by_enum, by_trace);
    println!(
        "enumeration and trace agree: {} triangles, {} balanced",
        by_enum.total, by_enum.balanced
    );
}
