//! Material files shipped in `presets/`, embedded for `validate`.

pub const PRESETS: &[(&str, &str)] = &[
    ("lorentz.toml", include_str!("../presets/lorentz.toml")),
    ("bim_chi0.5_kappa0.5.toml", include_str!("../presets/bim_chi0.5_kappa0.5.toml")),
    ("bim_chi-0.5_kappa0.5.toml", include_str!("../presets/bim_chi-0.5_kappa0.5.toml")),
    ("condon.toml", include_str!("../presets/condon.toml")),
];
