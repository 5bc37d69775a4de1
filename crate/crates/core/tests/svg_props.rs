mod common;

use common::*;
use ktc::palette::builtin_registry;
use ktc::svgrender::{layout, render_svg, LayoutConfig};
use ktc::treemodel::{Taxonomy, TreeNode};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn layout_invariants(t in taxonomy(5, false)) {
        let r = svg_properties(&t, &LayoutConfig::default());
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn invariants_hold_for_other_configs(
        t in taxonomy(3, true),
        em in 8.0..20.0f64,
        h in 4.0..60.0f64,
        v in 1.0..30.0f64,
    ) {
        let cfg = LayoutConfig { em_px: em, h_gap: h, v_gap: v, ..LayoutConfig::default() };
        let r = svg_properties(&t, &cfg);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn rendering_is_deterministic(t in taxonomy(3, true)) {
        let reg = builtin_registry();
        let cfg = LayoutConfig::default();
        prop_assert_eq!(render_svg(&t, &reg, &cfg).unwrap(), render_svg(&t, &reg, &cfg).unwrap());
    }
}

#[test]
fn framework_tree_hand_computed_positions() {
    // root s = 7.5em = 90px; children m = 9em = 108px at x = 90 + 36
    let t = framework_tree();
    let nodes = layout(&t, &LayoutConfig::default());
    assert_eq!(nodes[0].x, 0.0);
    assert!(nodes[1..].iter().all(|n| n.x == 126.0 && n.width == 108.0));
    let mean = nodes[1..].iter().map(|n| n.center_y()).sum::<f64>() / 4.0;
    assert!((nodes[0].center_y() - mean).abs() < 1e-9);
    assert_eq!(nodes[1].y, 0.0);
    for w in nodes[1..].windows(2) {
        assert!((w[1].y - (w[0].y + w[0].height + 10.0)).abs() < 1e-9);
    }
}

#[test]
fn framework_tree_structure() {
    let svg = render_svg(&framework_tree(), &builtin_registry(), &LayoutConfig::default()).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let count = |class: &str| doc.descendants().filter(|n| n.attribute("class") == Some(class)).count();
    assert_eq!((count("node"), count("edge"), count("brace"), count("split")), (5, 4, 2, 4));
    let root = doc.descendants().find(|n| n.attribute("class") == Some("node")).unwrap();
    assert_eq!(root.attribute("fill"), Some("#FFEBEE"));
}

#[test]
fn scale_applies_to_canvas() {
    let small = Taxonomy { scale: 0.5, ..Taxonomy::new(TreeNode::new("X")) };
    let svg = render_svg(&small, &builtin_registry(), &LayoutConfig::default()).unwrap();
    assert!(svg.contains("scale(0.5)"));
    assert!(svg.contains(r#"width="70""#), "{svg}");
}
