//! Built-in desk-scale configurations, one per figure of the study.

/// `(name, description, configuration)`.
pub const PRESETS: &[(&str, &str, &str)] = &[
    (
        "fig5a",
        "coupling memory at L = 1024 (K = 32, W = 32)",
        r#"
[run]
name = "fig5a"
[ebno]
grid = "0.5:0.25:3.0"
[stop]
max_bits = 2000000
[[scenario]]
K = 32
W = 32
m = 1
I_W = 3
[[scenario]]
K = 32
W = 32
m = 3
I_W = 3
[[scenario]]
K = 32
W = 32
m = 7
I_W = 3
[[scenario]]
K = 32
W = 32
m = 15
I_W = 3
"#,
    ),
    (
        "fig5b",
        "coupling memory at L = 8192 (K = 512, W = 16)",
        r#"
[run]
name = "fig5b"
[ebno]
grid = "0.25:0.125:1.25"
[stop]
max_bits = 2000000
[[scenario]]
K = 512
W = 16
m = 1
I_W = 5
[[scenario]]
K = 512
W = 16
m = 3
I_W = 5
[[scenario]]
K = 512
W = 16
m = 7
I_W = 5
"#,
    ),
    (
        "fig5c",
        "coupling memory at L = 8192 (K = 64, W = 128)",
        r#"
[run]
name = "fig5c"
[ebno]
grid = "0.25:0.125:1.5"
[stop]
max_bits = 2000000
[[scenario]]
K = 64
W = 128
m = 1
I_W = 1
[[scenario]]
K = 64
W = 128
m = 7
I_W = 1
[[scenario]]
K = 64
W = 128
m = 31
I_W = 1
[[scenario]]
K = 64
W = 128
m = 63
I_W = 1
"#,
    ),
    (
        "fig6a",
        "fixed latency and constraint length, L = 1024",
        r#"
[run]
name = "fig6a"
[ebno]
grid = "0.25:0.25:2.5"
[stop]
max_bits = 2000000
[[scenario]]
preset = "table1/L1024"
"#,
    ),
    (
        "fig6b",
        "fixed latency and constraint length, L = 2048",
        r#"
[run]
name = "fig6b"
[ebno]
grid = "0.25:0.25:2.0"
[stop]
max_bits = 2000000
[[scenario]]
preset = "table1/L2048"
"#,
    ),
    (
        "fig6c",
        "fixed latency and constraint length, L = 4096",
        r#"
[run]
name = "fig6c"
[ebno]
grid = "0.25:0.25:1.75"
[stop]
max_bits = 2000000
[[scenario]]
preset = "table1/L4096"
"#,
    ),
    (
        "fig6d",
        "fixed latency and constraint length, L = 8192",
        r#"
[run]
name = "fig6d"
[ebno]
grid = "0.25:0.125:1.5"
[stop]
max_bits = 2000000
[[scenario]]
preset = "table1/L8192"
"#,
    ),
    (
        "fig6e",
        "fixed latency and constraint length, L = 16384",
        r#"
[run]
name = "fig6e"
[ebno]
grid = "0.25:0.125:1.25"
[stop]
max_bits = 2000000
[[scenario]]
preset = "table1/L16384"
"#,
    ),
    (
        "fig7",
        "coupled against uncoupled at equal latency and I_eff = 80",
        r#"
[run]
name = "fig7"
[ebno]
grid = "0.25:0.125:1.5"
[stop]
max_bits = 2000000
[[scenario]]
K = 256
W = 4
m = 1
I_W = 20
[[scenario]]
uncoupled = true
K = 1024
I_W = 80
[[scenario]]
K = 2048
W = 4
m = 1
I_W = 20
[[scenario]]
uncoupled = true
K = 8192
I_W = 80
"#,
    ),
    (
        "fig8a",
        "window size at K = 128",
        r#"
[run]
name = "fig8a"
[ebno]
grid = "0.25:0.125:1.5"
[stop]
max_bits = 2000000
[[scenario]]
K = 128
W = 4
m = 1
I_W = 20
[[scenario]]
K = 128
W = 8
m = 1
I_W = 10
[[scenario]]
K = 128
W = 8
m = 3
I_W = 10
[[scenario]]
K = 128
W = 16
m = 3
I_W = 5
[[scenario]]
K = 128
W = 16
m = 7
I_W = 5
"#,
    ),
    (
        "fig8b",
        "window size at K = 256",
        r#"
[run]
name = "fig8b"
[ebno]
grid = "0.25:0.125:1.5"
[stop]
max_bits = 2000000
[[scenario]]
K = 256
W = 4
m = 1
I_W = 20
[[scenario]]
K = 256
W = 8
m = 1
I_W = 10
[[scenario]]
K = 256
W = 8
m = 3
I_W = 10
[[scenario]]
K = 256
W = 16
m = 7
I_W = 5
"#,
    ),
    (
        "fig8c",
        "window size at K = 2048",
        r#"
[run]
name = "fig8c"
[ebno]
grid = "0.25:0.125:1.25"
[stop]
max_bits = 2000000
[[scenario]]
K = 2048
W = 4
m = 1
I_W = 20
[[scenario]]
K = 2048
W = 8
m = 1
I_W = 10
[[scenario]]
K = 2048
W = 8
m = 3
I_W = 10
"#,
    ),
    (
        "fig9",
        "required Eb/N0 against latency for the fixed-latency scenarios",
        r#"
[run]
name = "fig9"
target_ber = 1e-4
[ebno]
grid = []
[stop]
max_bits = 2000000
[search]
start_db = 0.0
step_db = 0.25
max_db = 4.0
resolution_db = 0.0625
[[scenario]]
preset = "table1/L1024"
[[scenario]]
preset = "table1/L2048"
[[scenario]]
preset = "table1/L4096"
[[scenario]]
preset = "table1/L8192"
[[scenario]]
preset = "table1/L16384"
"#,
    ),
    (
        "fig10a",
        "effective iterations at L = 4096 (K = 256, W = 16, m = 7)",
        r#"
[run]
name = "fig10a"
[ebno]
grid = "0.25:0.125:1.5"
[stop]
max_bits = 2000000
[[scenario]]
K = 256
W = 16
m = 7
I_W = 2
[[scenario]]
K = 256
W = 16
m = 7
I_W = 5
[[scenario]]
K = 256
W = 16
m = 7
I_W = 10
"#,
    ),
    (
        "fig10b",
        "effective iterations at L = 16384 (K = 1024, W = 16, m = 7)",
        r#"
[run]
name = "fig10b"
[ebno]
grid = "0.25:0.125:1.25"
[stop]
max_bits = 2000000
[[scenario]]
K = 1024
W = 16
m = 7
I_W = 2
[[scenario]]
K = 1024
W = 16
m = 7
I_W = 5
[[scenario]]
K = 1024
W = 16
m = 7
I_W = 10
"#,
    ),
];

/// Configuration text of a named preset.
pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, c)| *c)
}
