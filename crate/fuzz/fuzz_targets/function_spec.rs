#![no_main]

use libfuzzer_sys::fuzz_target;
use qmcbench::functions::TestFunction;
use qmcbench::integrate::{Log2Range, Method};
use qmcbench::sobol::Property;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = s.parse::<TestFunction>() {
        assert_eq!(f.label().parse::<TestFunction>().unwrap().label(), f.label());
    }
    if let Ok(m) = s.parse::<Method>() {
        assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
    }
    if let Ok(r) = s.parse::<Log2Range>() {
        assert!(r.min <= r.max);
    }
    let _ = s.parse::<Property>();
});
