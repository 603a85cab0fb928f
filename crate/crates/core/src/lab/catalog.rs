//! Named norms and test surfaces.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::capillary::{capillary_wulff, closed_surface, perturbed_capillary, sphere_cap, CapillarySurface};
use crate::error::{domain, Error, Result};
use crate::norm::{DerivativeMode, MinkowskiNorm, NormDocument, NormSpec};
use crate::sphere::Vector;
use crate::surface::{PsiMode, RadialGraph, RadialProfile, SupportSurface};

pub const BUILTIN_NORMS: &[&str] = &[
    "isotropic",
    "ellipsoid",
    "ellipsoid-tilted",
    "harmonic",
    "harmonic-tilted",
];

/// A builtin norm by name in ambient dimension `dim` (2 or 3).
pub fn builtin_norm(name: &str, dim: usize) -> Result<NormDocument> {
    let spec = match (name, dim) {
        ("isotropic", d) => NormSpec::Isotropic { dim: d, c: 1.0 },
        ("ellipsoid", 3) => NormSpec::Ellipsoid {
            m: vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 4.0]],
        },
        ("ellipsoid", 2) => NormSpec::Ellipsoid {
            m: vec![vec![1.0, 0.0], vec![0.0, 4.0]],
        },
        ("ellipsoid-tilted", 3) => NormSpec::Ellipsoid {
            m: vec![vec![2.0, 0.0, 0.5], vec![0.0, 1.0, 0.2], vec![0.5, 0.2, 3.0]],
        },
        ("ellipsoid-tilted", 2) => NormSpec::Ellipsoid {
            m: vec![vec![2.0, 0.5], vec![0.5, 1.0]],
        },
        ("harmonic", 3) => harmonic(3, "zonal2"),
        ("harmonic", 2) => harmonic(2, "cos2"),
        ("harmonic-tilted", 3) => harmonic(3, "xz"),
        ("harmonic-tilted", 2) => harmonic(2, "sin2"),
        (other, d) => {
            return domain(format!(
                "unknown norm '{other}' in dimension {d} (valid: {})",
                BUILTIN_NORMS.join(", ")
            ))
        }
    };
    Ok(NormDocument {
        spec,
        derivatives: DerivativeMode::Analytic,
    })
}

fn harmonic(dim: usize, mode: &str) -> NormSpec {
    NormSpec::Harmonic {
        dim,
        eps: 0.1,
        mode: Some(mode.to_string()),
        terms: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "surface", rename_all = "kebab-case")]
pub enum SurfaceSpec {
    CapillaryWulff {
        r0: f64,
        omega0: f64,
    },
    PerturbedCapillary {
        r0: f64,
        omega0: f64,
        eps: f64,
        psi_mode: PsiMode,
    },
    /// Euclidean cap; always uses the isotropic norm.
    SphereCap {
        r: f64,
        theta: f64,
    },
    ClosedWulff {
        r: f64,
        center: Vec<f64>,
    },
    ClosedEllipsoid {
        semi_axes: Vec<f64>,
        center: Vec<f64>,
    },
    ClosedSphere {
        r: f64,
    },
    /// Closed ellipsoid as a radial graph with finite-difference curvature.
    RadialEllipsoid {
        semi_axes: Vec<f64>,
        step: f64,
    },
}

pub const SURFACE_KINDS: &[&str] = &[
    "capillary-wulff",
    "perturbed-capillary",
    "sphere-cap",
    "closed-wulff",
    "closed-ellipsoid",
    "closed-sphere",
    "radial-ellipsoid",
];

impl SurfaceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SurfaceSpec::CapillaryWulff { .. } => "capillary-wulff",
            SurfaceSpec::PerturbedCapillary { .. } => "perturbed-capillary",
            SurfaceSpec::SphereCap { .. } => "sphere-cap",
            SurfaceSpec::ClosedWulff { .. } => "closed-wulff",
            SurfaceSpec::ClosedEllipsoid { .. } => "closed-ellipsoid",
            SurfaceSpec::ClosedSphere { .. } => "closed-sphere",
            SurfaceSpec::RadialEllipsoid { .. } => "radial-ellipsoid",
        }
    }
}

/// A norm plus a surface family: everything needed to build the surface at
/// any refinement level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub norm: NormDocument,
    pub surface: SurfaceSpec,
}

impl Scenario {
    pub fn new(name: &str, norm: NormDocument, surface: SurfaceSpec) -> Self {
        let norm = match surface {
            SurfaceSpec::SphereCap { .. } => NormDocument {
                spec: NormSpec::Isotropic {
                    dim: spec_dim(&norm.spec),
                    c: 1.0,
                },
                derivatives: DerivativeMode::Analytic,
            },
            _ => norm,
        };
        Self {
            name: name.to_string(),
            norm,
            surface,
        }
    }

    pub fn norm(&self) -> Result<MinkowskiNorm> {
        MinkowskiNorm::from_document(&self.norm)
    }

    pub fn dim(&self) -> usize {
        spec_dim(&self.norm.spec)
    }

    pub fn build(&self, level: u32) -> Result<CapillarySurface> {
        let norm = self.norm()?;
        let dim = norm.dim();
        let vec_of = |c: &[f64]| -> Result<Vector> {
            if c.is_empty() {
                Ok(Vector::zeros(dim))
            } else if c.len() == dim {
                Ok(Vector::from_row_slice(c))
            } else {
                domain(format!("center has {} entries for dimension {dim}", c.len()))
            }
        };
        match &self.surface {
            SurfaceSpec::CapillaryWulff { r0, omega0 } => capillary_wulff(&norm, *r0, *omega0, level),
            SurfaceSpec::PerturbedCapillary {
                r0,
                omega0,
                eps,
                psi_mode,
            } => perturbed_capillary(&norm, *r0, *omega0, *eps, *psi_mode, level),
            SurfaceSpec::SphereCap { r, theta } => sphere_cap(dim, *r, *theta, level),
            SurfaceSpec::ClosedWulff { r, center } => {
                let model = SupportSurface::new(norm.clone(), *r, vec_of(center)?, false)?;
                closed_surface(Arc::new(model), &norm, level)
            }
            SurfaceSpec::ClosedEllipsoid { semi_axes, center } => {
                if semi_axes.len() != dim {
                    return domain("one semi-axis per coordinate is required");
                }
                let model = SupportSurface::ellipsoid(semi_axes, vec_of(center)?)?;
                closed_surface(Arc::new(model), &norm, level)
            }
            SurfaceSpec::ClosedSphere { r } => closed_surface(Arc::new(SupportSurface::sphere(dim, *r)?), &norm, level),
            SurfaceSpec::RadialEllipsoid { semi_axes, step } => {
                let model = RadialGraph::new(
                    dim,
                    RadialProfile::Ellipsoid {
                        semi_axes: semi_axes.clone(),
                    },
                    *step,
                )?;
                closed_surface(Arc::new(model), &norm, level)
            }
        }
    }

    /// Whether the surface is (part of) a Wulff shape of the scenario's norm.
    pub fn is_wulff(&self) -> bool {
        match &self.surface {
            SurfaceSpec::CapillaryWulff { .. } | SurfaceSpec::SphereCap { .. } | SurfaceSpec::ClosedWulff { .. } => {
                true
            }
            SurfaceSpec::PerturbedCapillary { eps, .. } => *eps == 0.0,
            SurfaceSpec::ClosedSphere { .. } => matches!(self.norm.spec, NormSpec::Isotropic { .. }),
            SurfaceSpec::ClosedEllipsoid { .. } | SurfaceSpec::RadialEllipsoid { .. } => false,
        }
    }

    /// Whether `ū` is constant: a Wulff shape whose center sits where the
    /// capillary construction puts it (the origin for closed shapes).
    pub fn has_constant_support(&self) -> bool {
        match &self.surface {
            SurfaceSpec::ClosedWulff { center, .. } => center.iter().all(|c| *c == 0.0),
            _ => self.is_wulff(),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(
            self.surface,
            SurfaceSpec::ClosedWulff { .. }
                | SurfaceSpec::ClosedEllipsoid { .. }
                | SurfaceSpec::ClosedSphere { .. }
                | SurfaceSpec::RadialEllipsoid { .. }
        )
    }

    pub fn is_isotropic(&self) -> bool {
        matches!(self.norm.spec, NormSpec::Isotropic { .. })
    }

    /// Whether curvature comes from finite differences (sets the ladder floor).
    pub fn has_fd_curvature(&self) -> bool {
        match &self.surface {
            SurfaceSpec::PerturbedCapillary { eps, .. } => *eps != 0.0,
            SurfaceSpec::RadialEllipsoid { .. } => true,
            _ => false,
        }
    }

    pub fn omega0(&self) -> Option<f64> {
        match &self.surface {
            SurfaceSpec::CapillaryWulff { omega0, .. } | SurfaceSpec::PerturbedCapillary { omega0, .. } => {
                Some(*omega0)
            }
            SurfaceSpec::SphereCap { theta, .. } => Some(-theta.cos()),
            _ => None,
        }
    }

    /// `r₀` of Wulff-type scenarios.
    pub fn radius(&self) -> Option<f64> {
        match &self.surface {
            SurfaceSpec::CapillaryWulff { r0, .. } | SurfaceSpec::PerturbedCapillary { r0, .. } => Some(*r0),
            SurfaceSpec::SphereCap { r, .. } | SurfaceSpec::ClosedWulff { r, .. } | SurfaceSpec::ClosedSphere { r } => {
                Some(*r)
            }
            _ => None,
        }
    }

    pub fn ladder_floor(&self) -> f64 {
        if self.has_fd_curvature() {
            crate::quadrature::FD_FLOOR
        } else {
            crate::quadrature::ANALYTIC_FLOOR
        }
    }
}

fn spec_dim(spec: &NormSpec) -> usize {
    match spec {
        NormSpec::Isotropic { dim, .. } | NormSpec::Harmonic { dim, .. } => *dim,
        NormSpec::Ellipsoid { m } => m.len(),
    }
}

fn norm3(name: &str) -> NormDocument {
    builtin_norm(name, 3).expect("builtin norm")
}

fn norm2(name: &str) -> NormDocument {
    builtin_norm(name, 2).expect("builtin norm")
}

/// The fixed scenario catalog used by the full suite.
pub fn named_scenarios() -> Vec<Scenario> {
    use SurfaceSpec::*;
    let pi = std::f64::consts::PI;
    vec![
        Scenario::new(
            "ellipsoid-wulff-cap",
            norm3("ellipsoid"),
            CapillaryWulff { r0: 1.0, omega0: -0.3 },
        ),
        Scenario::new(
            "tilted-wulff-cap",
            norm3("ellipsoid-tilted"),
            CapillaryWulff { r0: 1.2, omega0: 0.25 },
        ),
        Scenario::new(
            "harmonic-wulff-cap",
            norm3("harmonic-tilted"),
            CapillaryWulff { r0: 0.8, omega0: -0.5 },
        ),
        Scenario::new(
            "hemisphere",
            norm3("isotropic"),
            SphereCap {
                r: 1.0,
                theta: pi / 2.0,
            },
        ),
        Scenario::new(
            "sphere-cap",
            norm3("isotropic"),
            SphereCap {
                r: 1.0,
                theta: pi / 3.0,
            },
        ),
        Scenario::new(
            "perturbed-cap",
            norm3("isotropic"),
            PerturbedCapillary {
                r0: 1.0,
                omega0: -0.3,
                eps: 0.05,
                psi_mode: PsiMode::CosAzimuth,
            },
        ),
        Scenario::new(
            "ellipsoid-perturbed-cap",
            norm3("ellipsoid"),
            PerturbedCapillary {
                r0: 1.0,
                omega0: -0.3,
                eps: 0.05,
                psi_mode: PsiMode::CosAzimuth,
            },
        ),
        Scenario::new(
            "harmonic-perturbed-cap",
            norm3("harmonic"),
            PerturbedCapillary {
                r0: 1.0,
                omega0: 0.2,
                eps: 0.03,
                psi_mode: PsiMode::Radial,
            },
        ),
        Scenario::new("closed-sphere", norm3("isotropic"), ClosedSphere { r: 1.0 }),
        Scenario::new(
            "closed-ellipsoid-harmonic",
            norm3("harmonic"),
            ClosedEllipsoid {
                semi_axes: vec![1.0, 1.25, 0.8],
                center: vec![0.1, -0.05, 0.2],
            },
        ),
        Scenario::new(
            "closed-ellipsoid-euclidean",
            norm3("isotropic"),
            ClosedEllipsoid {
                semi_axes: vec![1.0, 1.25, 0.8],
                center: vec![0.1, -0.05, 0.2],
            },
        ),
        Scenario::new(
            "closed-wulff-tilted",
            norm3("ellipsoid-tilted"),
            ClosedWulff {
                r: 1.3,
                center: vec![0.2, 0.0, 0.1],
            },
        ),
        Scenario::new("arc-wulff", norm2("ellipsoid"), CapillaryWulff { r0: 1.0, omega0: 0.4 }),
        Scenario::new(
            "perturbed-arc",
            norm2("ellipsoid"),
            PerturbedCapillary {
                r0: 1.0,
                omega0: 0.4,
                eps: 0.05,
                psi_mode: PsiMode::CosAzimuth,
            },
        ),
        Scenario::new(
            "closed-ellipse-harmonic",
            norm2("harmonic"),
            ClosedEllipsoid {
                semi_axes: vec![1.5, 1.0],
                center: vec![0.1, 0.2],
            },
        ),
    ]
}

pub fn scenario(name: &str) -> Result<Scenario> {
    named_scenarios().into_iter().find(|s| s.name == name).ok_or_else(|| {
        let names: Vec<String> = named_scenarios().into_iter().map(|s| s.name).collect();
        Error::Domain(format!("unknown scenario '{name}' (valid: {})", names.join(", ")))
    })
}
