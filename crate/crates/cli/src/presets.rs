//! Named parameter presets for the CLI.

use crate::params::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Preset {
    pub omega: Option<f64>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub c: Option<f64>,
    pub delta: Option<f64>,
    pub r: Option<f64>,
    pub axis: Option<AxisRange>,
    pub axis2: Option<AxisRange>,
    pub asymptote: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
}

const C_RANGE: AxisRange = AxisRange {
    axis: Axis::C,
    min: 1.0,
    max: 5.0,
};
const DELTA_RANGE: AxisRange = AxisRange {
    axis: Axis::Delta,
    min: 0.125,
    max: 5.0,
};
const LAMBDA_RANGE: AxisRange = AxisRange {
    axis: Axis::Lambda,
    min: 0.0,
    max: 0.3,
};

pub const NAMES: [&str; 8] = [
    "fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b",
];

pub fn lookup(name: &str) -> Option<Preset> {
    let fig1 = Preset {
        omega: Some(1.0),
        lambda: Some(0.1),
        mu: Some(0.0),
        r: Some(0.0),
        axis: Some(C_RANGE),
        ..Preset::default()
    };
    let fig2 = Preset {
        omega: Some(1.0),
        lambda: Some(0.1),
        r: Some(0.0),
        axis: Some(DELTA_RANGE),
        ..Preset::default()
    };
    let fig3 = Preset {
        omega: Some(1.0),
        mu: Some(0.0),
        r: Some(0.0),
        c: Some(3.0),
        axis: Some(LAMBDA_RANGE),
        ..Preset::default()
    };
    let fig4 = Preset {
        omega: Some(1.0),
        lambda: Some(0.1),
        mu: Some(0.0),
        axis: Some(DELTA_RANGE),
        axis2: Some(C_RANGE),
        asymptote: true,
        ..Preset::default()
    };
    Some(match name {
        "fig1a" => Preset {
            delta: Some(1.0),
            ..fig1
        },
        "fig1b" => Preset {
            delta: Some(2.0),
            ..fig1
        },
        "fig2a" => Preset {
            mu: Some(0.0),
            c: Some(1.0),
            ..fig2
        },
        "fig2b" => Preset {
            mu: Some(0.08),
            c: Some(5.0 / 3.0),
            ..fig2
        },
        "fig3a" => Preset {
            delta: Some(1.0),
            ..fig3
        },
        "fig3b" => Preset {
            delta: Some(2.0),
            ..fig3
        },
        "fig4a" => Preset {
            r: Some(0.0),
            ..fig4
        },
        "fig4b" => Preset {
            r: Some(0.75),
            ..fig4
        },
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for n in NAMES {
            assert!(lookup(n).is_some(), "{n}");
        }
        assert!(lookup("fig5").is_none());
        assert!(lookup("fig4b").unwrap().asymptote);
    }
}
