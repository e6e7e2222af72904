//! The files under inputs/ are the library generators written out; set
//! NONSS_BLESS=1 to regenerate them.

use nonss::closedforms::lens_chain_presentation;
use nonss::qcore::{c, re};
use nonss::repcat::ColorLabel;
use nonss::surgery::presets;
use nonss::tangle::{library, Diagram, StrandColor};
use nonss_cli::schema::{parse_text, to_file, to_json};
use std::path::PathBuf;

fn va(x: f64, y: f64) -> StrandColor {
    StrandColor::Color(ColorLabel::Valpha(c(x, y)))
}

fn fixtures() -> Vec<(&'static str, Diagram, i64)> {
    let rd3 = nonss::RootData::new(3).unwrap();
    vec![
        ("unknot.json", library::unknot(va(0.3, 0.0), 0), 0),
        ("hopf_link.json", library::hopf_link(va(0.3, 0.0), 0, va(-0.2, 0.1), 0), 0),
        ("trefoil.json", library::trefoil(va(0.43, 0.0)), 0),
        ("s2xs1_p0.json", presets::s2xs1_core(c(0.37, 0.11), ColorLabel::Pj(0)).diagram, 0),
        ("s3_blown_up.json", presets::s3_unknot_blown_up(&rd3, re(0.3), 0).diagram, 0),
        ("lens_5_2_k1.json", lens_chain_presentation(5, 2, 1).unwrap().diagram, 0),
    ]
}

#[test]
fn inputs_match_generators() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("inputs");
    let bless = std::env::var("NONSS_BLESS").is_ok();
    for (name, d, n) in fixtures() {
        let text = to_json(&to_file(&d, n));
        let path = dir.join(name);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, text, "{name} is stale");
        assert_eq!(parse_text(&on_disk).unwrap().diagram, d, "{name}");
    }
}
