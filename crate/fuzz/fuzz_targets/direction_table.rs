#![no_main]

use libfuzzer_sys::fuzz_target;
use qmcbench::sobol::{parse_direction_table, sobol_point};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = parse_direction_table(text) {
        // a table that parses must generate points in [0, 1)
        let dim = table.dimensions();
        for index in [0, 1, 2, 1023] {
            let p = sobol_point(&table, dim, index).unwrap();
            assert!(p.iter().all(|x| (0.0..1.0).contains(x)));
        }
    }
});
