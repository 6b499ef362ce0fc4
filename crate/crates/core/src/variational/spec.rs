use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::VariationalError;
use crate::expr::Expr;
use crate::fracops::FractionalOrder;

/// Names the Lagrangian may use besides slots and parameters. `xdot` is
/// accepted on input and rewritten to `v`.
const BASE_VARS: [&str; 3] = ["t", "x", "v"];

/// Whether a fractional slot differentiates a function of `x` or of `ẋ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlotArgument {
    #[serde(rename = "x")]
    Position,
    #[serde(rename = "v")]
    Velocity,
}

impl SlotArgument {
    pub fn var(self) -> &'static str {
        match self {
            SlotArgument::Position => "x",
            SlotArgument::Velocity => "v",
        }
    }
}

/// A Lagrangian argument `name = ₐᶜD_t^α function(argument)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalSlot {
    pub name: String,
    #[serde(rename = "of")]
    pub argument: SlotArgument,
    #[serde(rename = "f")]
    pub function: Expr,
}

/// A Lagrangian `L(t, x, v, u, w, …)` with the functions `f`, `g` behind its
/// fractional slots `u`, `w` and their common order `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianSpec {
    pub name: String,
    lagrangian: Expr,
    /// `u` and `w` first, then any extra slots.
    slots: Vec<FractionalSlot>,
    alpha: FractionalOrder,
    parameters: Vec<String>,
}

fn alias_xdot(e: &Expr) -> Expr {
    e.substitute("xdot", &Expr::var("v"))
}

impl LagrangianSpec {
    pub fn new(
        name: impl Into<String>,
        lagrangian: Expr,
        f: Expr,
        g: Expr,
        alpha: FractionalOrder,
    ) -> Result<Self, VariationalError> {
        LagrangianSpec::with_extras(name, lagrangian, f, g, alpha, Vec::new(), Vec::new())
    }

    /// Like [`new`](LagrangianSpec::new), with further fractional slots the
    /// Lagrangian may refer to by name and symbolic parameters to be fixed
    /// later with [`bind`](LagrangianSpec::bind).
    pub fn with_extras(
        name: impl Into<String>,
        lagrangian: Expr,
        f: Expr,
        g: Expr,
        alpha: FractionalOrder,
        extra_slots: Vec<FractionalSlot>,
        parameters: Vec<String>,
    ) -> Result<Self, VariationalError> {
        let mut slots = vec![
            FractionalSlot {
                name: "u".into(),
                argument: SlotArgument::Position,
                function: f,
            },
            FractionalSlot {
                name: "w".into(),
                argument: SlotArgument::Velocity,
                function: g,
            },
        ];
        slots.extend(extra_slots);
        for s in &mut slots {
            s.function = alias_xdot(&s.function).simplify();
        }
        let spec = LagrangianSpec {
            name: name.into(),
            lagrangian: alias_xdot(&lagrangian).simplify(),
            slots,
            alpha,
            parameters,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Substitutes a value for a declared parameter.
    pub fn bind(&self, parameter: &str, value: f64) -> Result<Self, VariationalError> {
        let Some(k) = self.parameters.iter().position(|p| p == parameter) else {
            return Err(VariationalError::InvalidSpec(format!(
                "'{}' has no parameter '{parameter}'",
                self.name
            )));
        };
        let mut out = self.clone();
        out.parameters.remove(k);
        out.lagrangian = self
            .lagrangian
            .substitute(parameter, &Expr::real(value))
            .simplify();
        Ok(out)
    }

    /// The same spec with the imaginary unit in `L` replaced by `unit`;
    /// `unit = 1` gives a real-coefficient variant.
    pub fn replace_imaginary_unit(&self, unit: Complex64) -> Self {
        let mut out = self.clone();
        out.lagrangian = self.lagrangian.replace_imaginary_unit(unit).simplify();
        out
    }

    pub fn lagrangian(&self) -> &Expr {
        &self.lagrangian
    }

    pub fn f(&self) -> &Expr {
        &self.slots[0].function
    }

    pub fn g(&self) -> &Expr {
        &self.slots[1].function
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn slots(&self) -> &[FractionalSlot] {
        &self.slots
    }

    pub fn extra_slots(&self) -> &[FractionalSlot] {
        &self.slots[2..]
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    /// Variable names of `L` in evaluation order: `t, x, v`, then the slots.
    pub(crate) fn variables(&self) -> Vec<&str> {
        BASE_VARS
            .iter()
            .copied()
            .chain(self.slots.iter().map(|s| s.name.as_str()))
            .collect()
    }

    fn validate(&self) -> Result<(), VariationalError> {
        let bad = |msg: String| Err(VariationalError::InvalidSpec(msg));
        let mut names: Vec<&str> = BASE_VARS.to_vec();
        for s in &self.slots {
            if s.name.is_empty()
                || names.contains(&s.name.as_str())
                || s.name == "i"
                || s.name == "xdot"
            {
                return bad(format!("slot name '{}' is reserved or repeated", s.name));
            }
            names.push(&s.name);
            let arg = s.argument.var();
            if let Some(other) = s.function.free_vars().into_iter().find(|v| v != arg) {
                return bad(format!(
                    "the function behind slot '{}' may only depend on {arg}, found '{other}'",
                    s.name
                ));
            }
        }
        for p in &self.parameters {
            if p.is_empty() || names.contains(&p.as_str()) || p == "i" || p == "xdot" {
                return bad(format!("parameter name '{p}' is reserved or repeated"));
            }
            names.push(p);
        }
        if let Some(other) = self
            .lagrangian
            .free_vars()
            .into_iter()
            .find(|v| !names.contains(&v.as_str()))
        {
            return bad(format!("L uses unknown variable '{other}'"));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    name: String,
    #[serde(rename = "L")]
    lagrangian: Expr,
    f: Expr,
    g: Expr,
    alpha: FractionalOrder,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    extra_slots: Vec<FractionalSlot>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    parameters: Vec<String>,
}

impl Serialize for LagrangianSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpecJson {
            name: self.name.clone(),
            lagrangian: self.lagrangian.clone(),
            f: self.f().clone(),
            g: self.g().clone(),
            alpha: self.alpha,
            extra_slots: self.extra_slots().to_vec(),
            parameters: self.parameters.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LagrangianSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SpecJson::deserialize(d)?;
        LagrangianSpec::with_extras(
            raw.name,
            raw.lagrangian,
            raw.f,
            raw.g,
            raw.alpha,
            raw.extra_slots,
            raw.parameters,
        )
        .map_err(D::Error::custom)
    }
}
