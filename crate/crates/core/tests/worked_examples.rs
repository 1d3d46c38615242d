//! The three worked traces: MCF at k=5, MCF at k=10, Picky vs MCF at k=9.

use rebuf_core::color::seq;
use rebuf_core::{
    count_switches, excess_run, k_min_branches, profile, replay, simulate, switch_ratio,
    StrategyKind, TraceKind,
};

const EX1: [u32; 11] = [1, 2, 2, 1, 3, 3, 3, 2, 3, 2, 2];
const EX2: [u32; 19] = [1, 1, 2, 2, 1, 3, 1, 1, 2, 2, 3, 3, 3, 1, 2, 2, 3, 3, 1];
const EX3: [u32; 23] = [
    1, 2, 3, 1, 2, 3, 3, 3, 3, 2, 2, 1, 1, 2, 2, 1, 1, 2, 3, 4, 4, 3, 2,
];

#[test]
fn example1_mcf_k5() {
    let x = seq(&EX1);
    let r = simulate(&x, 5, StrategyKind::Mcf, None).unwrap();
    assert_eq!(r.output.values(), [1, 1, 3, 3, 3, 3, 2, 2, 2, 2, 2]);
    assert_eq!(count_switches(&x), 6);
    assert_eq!(count_switches(&r.output), 2);
    assert_eq!(switch_ratio(&x, &r.output).unwrap(), 1.0 / 3.0);

    // one forward of a 3 between the selection of 3 and of 2
    let kinds: Vec<TraceKind> = r.trace.iter().map(|e| e.kind).collect();
    assert_eq!(
        kinds,
        [
            TraceKind::Fill,
            TraceKind::Select,
            TraceKind::Fill,
            TraceKind::Select,
            TraceKind::Fill,
            TraceKind::ForwardCurrentColor,
            TraceKind::Fill,
            TraceKind::Drain,
        ]
    );
}

#[test]
fn example2_mcf_k10() {
    let x = seq(&EX2);
    let p = profile(&x);
    let km = k_min_branches(p.o1, p.o2, p.sigma).unwrap();
    assert_eq!((km.k_min, km.by_o1, km.by_o2), (10, 10, 19));

    let r = simulate(&x, km.k_min, StrategyKind::Mcf, None).unwrap();
    assert_eq!(
        r.output.values(),
        [1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 1]
    );
    assert_eq!(r.output.blocks(), 4);

    let full: Vec<_> = r
        .full_buffer_selections
        .iter()
        .filter(|(_, full)| *full)
        .map(|(c, _)| c.get())
        .collect();
    let mut dedup = full.clone();
    dedup.sort_unstable();
    dedup.dedup();
    assert_eq!(full.len(), dedup.len(), "split color among {full:?}");
}

#[test]
fn example3_picky_vs_mcf_k9() {
    let x = seq(&EX3);
    let p = profile(&x);
    let km = k_min_branches(p.o1, p.o2, p.sigma).unwrap();
    assert_eq!((km.k_min, km.by_o2), (17, 29));

    let picky = simulate(&x, 9, StrategyKind::Picky, None).unwrap();
    assert_eq!(
        picky.output.values(),
        [3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 4, 4, 3, 3]
    );
    let mcf = simulate(&x, 9, StrategyKind::Mcf, None).unwrap();
    assert_eq!(
        mcf.output.values(),
        [3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 3, 3, 4, 4, 2]
    );
    assert_eq!(picky.output.blocks(), 5);
    assert_eq!(mcf.output.blocks(), 6);

    // skips at stages 5 and 7 and once more in stage 8
    assert_eq!(picky.skipped_count, 3);
    assert_eq!(
        excess_run(picky.skipped_count, x.len()).unwrap(),
        3.0 / 23.0
    );
    assert_eq!(mcf.skipped_count, 0);

    let skipped: Vec<_> = picky
        .trace
        .iter()
        .filter(|e| e.kind == TraceKind::Skip)
        .map(|e| (e.color.unwrap().get(), e.input_remaining))
        .collect();
    assert_eq!(skipped, [(3, 2), (3, 2), (3, 1)]);
}

#[test]
fn example3_stage_contents() {
    let x = seq(&EX3);
    let r = simulate(&x, 9, StrategyKind::Picky, None).unwrap();
    let rep = replay(&x, 9, &r.trace).unwrap();
    let vals = |v: &[rebuf_core::ColorId]| v.iter().map(|c| c.get()).collect::<Vec<_>>();

    // first full buffer: five 3s, two 2s, two 1s
    let first_fill = &rep.stages[1];
    assert_eq!(vals(&first_fill.buffer), [1, 2, 3, 1, 2, 3, 3, 3, 3]);

    // right before the first skip the buffer holds six 1s, one 3, two 4s
    let before_skip = rep
        .stages
        .iter()
        .position(|s| s.event.is_some_and(|e| e.kind == TraceKind::Skip))
        .unwrap();
    let mut b = vals(&rep.stages[before_skip - 1].buffer);
    b.sort_unstable();
    assert_eq!(b, [1, 1, 1, 1, 1, 1, 3, 4, 4]);

    // drain starts from 4,4,3,3
    let drain_start = rep
        .stages
        .iter()
        .position(|s| s.event.is_some_and(|e| e.kind == TraceKind::Drain))
        .unwrap();
    assert_eq!(vals(&rep.stages[drain_start - 1].buffer), [4, 4, 3, 3]);
}

#[test]
fn short_input_sorted_by_frequency() {
    let x = seq(&[2, 1, 3, 1, 2, 1, 4]);
    let r = simulate(&x, x.len(), StrategyKind::Mcf, None).unwrap();
    assert_eq!(r.output.values(), [1, 1, 1, 2, 2, 3, 4]);
    assert_eq!(r.output.blocks(), profile(&x).sigma);
}
