#![no_main]

use libfuzzer_sys::fuzz_target;
use ncvem::mesh::{mesh_to_json, parse_mesh_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(mesh) = parse_mesh_json(text) else { return };
    // whatever parses must survive a write/read cycle unchanged
    let again = parse_mesh_json(&mesh_to_json(&mesh)).expect("written mesh parses");
    assert_eq!(again.counts(), mesh.counts());
    for (a, b) in mesh.vertices.iter().zip(&again.vertices) {
        assert_eq!(a.x.to_bits(), b.x.to_bits());
        assert_eq!(a.y.to_bits(), b.y.to_bits());
    }
});
