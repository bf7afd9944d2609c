/// Proper edge colouring of a bipartite multigraph with exactly
/// max-degree colours (König's theorem), by alternating-path recolouring.
///
/// Left vertices are `0..left`, right vertices `0..right`; `edges[k] = (u, v)`
/// joins left `u` to right `v`. Returns one colour per edge.
pub fn bipartite_edge_coloring(left: usize, right: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut degree = vec![0usize; left + right];
    for &(u, v) in edges {
        assert!(u < left && v < right, "edge ({u}, {v}) out of range");
        degree[u] += 1;
        degree[left + v] += 1;
    }
    let delta = degree.iter().copied().max().unwrap_or(0);
    // at[x][c]: edge of colour c incident to vertex x
    let mut at: Vec<Vec<Option<usize>>> = vec![vec![None; delta]; left + right];
    let mut colour = vec![usize::MAX; edges.len()];
    let ends = |e: usize| (edges[e].0, left + edges[e].1);

    for e in 0..edges.len() {
        let (u, v) = ends(e);
        let a = (0..delta)
            .find(|&c| at[u][c].is_none())
            .expect("u has a free colour");
        if at[v][a].is_some() {
            let b = (0..delta)
                .find(|&c| at[v][c].is_none())
                .expect("v has a free colour");
            let mut path = Vec::new();
            let (mut x, mut c) = (v, a);
            while let Some(f) = at[x][c] {
                path.push(f);
                let (p, q) = ends(f);
                x = if p == x { q } else { p };
                c = if c == a { b } else { a };
            }
            for &f in &path {
                let (p, q) = ends(f);
                at[p][colour[f]] = None;
                at[q][colour[f]] = None;
            }
            for &f in &path {
                let (p, q) = ends(f);
                colour[f] = if colour[f] == a { b } else { a };
                at[p][colour[f]] = Some(f);
                at[q][colour[f]] = Some(f);
            }
        }
        colour[e] = a;
        at[u][a] = Some(e);
        at[v][a] = Some(e);
    }
    colour
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
        let colour = bipartite_edge_coloring(left, right, edges);
        let mut used = std::collections::HashSet::new();
        for (e, &(u, v)) in edges.iter().enumerate() {
            assert!(used.insert((0, u, colour[e])), "left {u} reuses colour");
            assert!(used.insert((1, v, colour[e])), "right {v} reuses colour");
        }
        colour.iter().map(|c| c + 1).max().unwrap_or(0)
    }

    #[test]
    fn star_and_multi_edges() {
        assert_eq!(check(4, 1, &[(0, 0), (1, 0), (2, 0), (3, 0)]), 4);
        assert_eq!(check(1, 1, &[(0, 0), (0, 0), (0, 0)]), 3);
        assert_eq!(check(0, 0, &[]), 0);
    }

    #[test]
    fn needs_recolouring() {
        // a 6-cycle plus chords that defeat first-fit colouring
        let edges = [
            (0, 0),
            (1, 1),
            (0, 1),
            (2, 2),
            (1, 2),
            (2, 0),
            (1, 0),
            (0, 2),
            (2, 1),
        ];
        assert_eq!(check(3, 3, &edges), 3);
    }

    proptest! {
        #[test]
        fn uses_max_degree_colours(edges in prop::collection::vec((0usize..6, 0usize..6), 0..40)) {
            let mut deg = [[0usize; 6]; 2];
            for &(u, v) in &edges {
                deg[0][u] += 1;
                deg[1][v] += 1;
            }
            let delta = deg.iter().flatten().copied().max().unwrap_or(0);
            prop_assert_eq!(check(6, 6, &edges), delta);
        }
    }
}
