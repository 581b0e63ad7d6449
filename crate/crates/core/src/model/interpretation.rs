use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde_json::{json, Map, Value};

use super::error::ModelError;
use crate::logic::Signature;

/// Position of an argument tuple in a dense table over a domain of `size` elements.
pub(crate) fn tuple_index(args: &[usize], size: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

/// Inverse of [`tuple_index`].
pub(crate) fn index_tuple(mut index: usize, arity: usize, size: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

pub(crate) fn cell_count(arity: usize, size: usize) -> usize {
    size.pow(arity as u32)
}

/// A total function `D^n -> D`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

impl FunctionTable {
    pub fn apply(&self, args: &[usize], size: usize) -> usize {
        self.values[tuple_index(args, size)]
    }
}

/// A relation over `D^n`, stored as a dense membership vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub members: Vec<bool>,
}

impl Relation {
    pub fn empty(arity: usize, size: usize) -> Self {
        Relation { arity, members: vec![false; cell_count(arity, size)] }
    }

    pub fn contains(&self, args: &[usize], size: usize) -> bool {
        self.members[tuple_index(args, size)]
    }

    pub fn tuples(&self, size: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let arity = self.arity;
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| index_tuple(i, arity, size))
    }
}

/// A finite structure for a signature: a non-empty domain, an element for every constant, a
/// total table for every function and a relation for every predicate. Predicate terms
/// evaluate to one of two designated elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    signature: Signature,
    domain: Vec<String>,
    index: HashMap<String, usize>,
    constants: BTreeMap<String, usize>,
    functions: BTreeMap<String, FunctionTable>,
    relations: BTreeMap<String, Relation>,
    designated: Option<(usize, usize)>,
}

impl Interpretation {
    /// Starts an interpretation with every relation empty and nothing else assigned; call the
    /// setters and then [`Interpretation::check_complete`].
    pub fn new<S: Into<String>>(
        signature: Signature,
        domain: impl IntoIterator<Item = S>,
    ) -> Result<Self, ModelError> {
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        if domain.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        let mut index = HashMap::new();
        for (i, d) in domain.iter().enumerate() {
            if index.insert(d.clone(), i).is_some() {
                return Err(ModelError::DuplicateElement(d.clone()));
            }
        }
        let size = domain.len();
        let relations = signature
            .predicates()
            .map(|(p, a)| (p.to_string(), Relation::empty(a, size)))
            .collect();
        Ok(Interpretation {
            signature,
            domain,
            index,
            constants: BTreeMap::new(),
            functions: BTreeMap::new(),
            relations,
            designated: None,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn element(&self, name: &str) -> Result<usize, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownElement(name.to_string()))
    }

    pub fn element_name(&self, e: usize) -> &str {
        &self.domain[e]
    }

    pub fn constant(&self, name: &str) -> Result<usize, ModelError> {
        self.constants
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::MissingConstant(name.to_string()))
    }

    pub fn function(&self, name: &str) -> Result<&FunctionTable, ModelError> {
        self.functions
            .get(name)
            .ok_or_else(|| ModelError::MissingTable(name.to_string()))
    }

    pub fn relation(&self, name: &str) -> Result<&Relation, ModelError> {
        self.relations
            .get(name)
            .ok_or_else(|| ModelError::MissingTable(name.to_string()))
    }

    pub fn designated(&self) -> Option<(usize, usize)> {
        self.designated
    }

    pub fn holds(&self, predicate: &str, args: &[usize]) -> Result<bool, ModelError> {
        Ok(self.relation(predicate)?.contains(args, self.size()))
    }

    pub fn apply(&self, function: &str, args: &[usize]) -> Result<usize, ModelError> {
        Ok(self.function(function)?.apply(args, self.size()))
    }

    pub fn set_constant(&mut self, name: &str, element: &str) -> Result<(), ModelError> {
        if !self.signature.is_constant(name) {
            return Err(ModelError::UnknownSymbol(name.to_string()));
        }
        let e = self.element(element)?;
        self.constants.insert(name.to_string(), e);
        Ok(())
    }

    pub(crate) fn set_constant_index(&mut self, name: &str, e: usize) {
        self.constants.insert(name.to_string(), e);
    }

    /// Installs a function table computed from element indices.
    pub fn set_function_with(
        &mut self,
        name: &str,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<(), ModelError> {
        let arity = self
            .signature
            .function_arity(name)
            .ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))?;
        let size = self.size();
        let values = (0..cell_count(arity, size))
            .map(|i| f(&index_tuple(i, arity, size)))
            .collect::<Vec<_>>();
        if let Some(&bad) = values.iter().find(|&&v| v >= size) {
            return Err(ModelError::UnknownElement(format!("#{bad}")));
        }
        self.functions.insert(name.to_string(), FunctionTable { arity, values });
        Ok(())
    }

    /// Installs a function table from named entries; every argument tuple must be covered.
    pub fn set_function<'s>(
        &mut self,
        name: &str,
        entries: impl IntoIterator<Item = (Vec<&'s str>, &'s str)>,
    ) -> Result<(), ModelError> {
        let arity = self
            .signature
            .function_arity(name)
            .ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))?;
        let size = self.size();
        let mut values = vec![None; cell_count(arity, size)];
        for (args, value) in entries {
            if args.len() != arity {
                return Err(ModelError::BadTuple {
                    symbol: name.to_string(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let idx = args
                .iter()
                .map(|a| self.element(a))
                .collect::<Result<Vec<_>, _>>()?;
            values[tuple_index(&idx, size)] = Some(self.element(value)?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| ModelError::PartialTable {
                    symbol: name.to_string(),
                    entry: index_tuple(i, arity, size)
                        .iter()
                        .map(|&e| self.domain[e].clone())
                        .collect::<Vec<_>>()
                        .join(","),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.functions.insert(name.to_string(), FunctionTable { arity, values });
        Ok(())
    }

    pub(crate) fn set_function_table(&mut self, name: &str, table: FunctionTable) {
        self.functions.insert(name.to_string(), table);
    }

    pub(crate) fn set_relation(&mut self, name: &str, relation: Relation) {
        self.relations.insert(name.to_string(), relation);
    }

    fn predicate_arity(&self, name: &str) -> Result<usize, ModelError> {
        self.signature
            .predicate_arity(name)
            .ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))
    }

    pub fn add_tuple(&mut self, predicate: &str, tuple: &[&str]) -> Result<(), ModelError> {
        let arity = self.predicate_arity(predicate)?;
        if tuple.len() != arity {
            return Err(ModelError::BadTuple {
                symbol: predicate.to_string(),
                expected: arity,
                found: tuple.len(),
            });
        }
        let idx = tuple
            .iter()
            .map(|a| self.element(a))
            .collect::<Result<Vec<_>, _>>()?;
        self.add_tuple_index(predicate, &idx);
        Ok(())
    }

    pub(crate) fn add_tuple_index(&mut self, predicate: &str, tuple: &[usize]) {
        let size = self.size();
        if let Some(rel) = self.relations.get_mut(predicate) {
            rel.members[tuple_index(tuple, size)] = true;
        }
    }

    pub fn remove_tuple(&mut self, predicate: &str, tuple: &[&str]) -> Result<bool, ModelError> {
        let idx = tuple
            .iter()
            .map(|a| self.element(a))
            .collect::<Result<Vec<_>, _>>()?;
        let size = self.size();
        let rel = self
            .relations
            .get_mut(predicate)
            .ok_or_else(|| ModelError::UnknownSymbol(predicate.to_string()))?;
        if idx.len() != rel.arity {
            return Err(ModelError::BadTuple {
                symbol: predicate.to_string(),
                expected: rel.arity,
                found: idx.len(),
            });
        }
        let slot = &mut rel.members[tuple_index(&idx, size)];
        Ok(std::mem::replace(slot, false))
    }

    pub fn designate(&mut self, top: &str, bottom: &str) -> Result<(), ModelError> {
        let pair = (self.element(top)?, self.element(bottom)?);
        self.designated = Some(pair);
        Ok(())
    }

    pub(crate) fn designate_index(&mut self, top: usize, bottom: usize) {
        self.designated = Some((top, bottom));
    }

    /// Fails unless every constant has an element and every function a total table.
    pub fn check_complete(&self) -> Result<(), ModelError> {
        for c in self.signature.constants() {
            self.constant(c)?;
        }
        for (f, _) in self.signature.functions() {
            self.function(f)?;
        }
        Ok(())
    }

    /// The same structure with every domain element renamed. Renaming must be injective.
    pub fn rename_elements(&self, rename: impl Fn(&str) -> String) -> Result<Self, ModelError> {
        let mut out = self.clone();
        out.domain = self.domain.iter().map(|d| rename(d)).collect();
        out.index.clear();
        for (i, d) in out.domain.iter().enumerate() {
            if out.index.insert(d.clone(), i).is_some() {
                return Err(ModelError::DuplicateElement(d.clone()));
            }
        }
        Ok(out)
    }

    /// Reads the JSON form:
    /// `{"domain": [...], "constants": {...}, "functions": {"f": {"d1,d2": "d3"}},
    ///   "relations": {"P": [["d1", "d2"]]}, "designated_true": "...", "designated_false": "..."}`.
    /// Relations that are not listed are empty; a nullary relation is true iff it lists `[]`.
    pub fn from_json_value(value: &Value, signature: &Signature) -> Result<Self, ModelError> {
        let obj = value
            .as_object()
            .ok_or_else(|| ModelError::Json("expected an object".into()))?;
        for key in obj.keys() {
            if !matches!(
                key.as_str(),
                "domain" | "constants" | "functions" | "relations" | "designated_true"
                    | "designated_false"
            ) {
                return Err(ModelError::Json(format!("unexpected field `{key}`")));
            }
        }
        let domain = obj
            .get("domain")
            .and_then(Value::as_array)
            .ok_or_else(|| ModelError::Json("`domain` must be an array".into()))?
            .iter()
            .map(|d| {
                d.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| ModelError::Json("domain elements must be strings".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut interp = Interpretation::new(signature.clone(), domain)?;
        if let Some(cs) = obj.get("constants") {
            let cs = cs
                .as_object()
                .ok_or_else(|| ModelError::Json("`constants` must be an object".into()))?;
            for (name, el) in cs {
                let el = el
                    .as_str()
                    .ok_or_else(|| ModelError::Json(format!("constant `{name}` must map to a string")))?;
                interp.set_constant(name, el)?;
            }
        }
        if let Some(fs) = obj.get("functions") {
            let fs = fs
                .as_object()
                .ok_or_else(|| ModelError::Json("`functions` must be an object".into()))?;
            for (name, table) in fs {
                let table = table
                    .as_object()
                    .ok_or_else(|| ModelError::Json(format!("table for `{name}` must be an object")))?;
                let mut entries = Vec::new();
                for (k, v) in table {
                    let v = v
                        .as_str()
                        .ok_or_else(|| ModelError::Json(format!("`{name}` values must be strings")))?;
                    entries.push((k.split(',').map(str::trim).collect::<Vec<_>>(), v));
                }
                interp.set_function(name, entries)?;
            }
        }
        if let Some(rs) = obj.get("relations") {
            let rs = rs
                .as_object()
                .ok_or_else(|| ModelError::Json("`relations` must be an object".into()))?;
            for (name, tuples) in rs {
                let tuples = tuples
                    .as_array()
                    .ok_or_else(|| ModelError::Json(format!("relation `{name}` must be an array")))?;
                interp.predicate_arity(name)?;
                for t in tuples {
                    let t = t
                        .as_array()
                        .ok_or_else(|| ModelError::Json(format!("`{name}` tuples must be arrays")))?
                        .iter()
                        .map(|e| {
                            e.as_str()
                                .ok_or_else(|| ModelError::Json("tuple entries must be strings".into()))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    interp.add_tuple(name, &t)?;
                }
            }
        }
        match (obj.get("designated_true"), obj.get("designated_false")) {
            (None, None) => {}
            (Some(Value::String(t)), Some(Value::String(f))) => interp.designate(t, f)?,
            _ => {
                return Err(ModelError::Json(
                    "`designated_true` and `designated_false` must be given together as strings".into(),
                ))
            }
        }
        interp.check_complete()?;
        Ok(interp)
    }

    pub fn from_json_str(text: &str, signature: &Signature) -> Result<Self, ModelError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        Self::from_json_value(&value, signature)
    }

    pub fn load(path: &Path, signature: &Signature) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ModelError::Json(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text, signature)
    }

    pub fn to_json_value(&self) -> Value {
        let name = |e: usize| Value::String(self.domain[e].clone());
        let size = self.size();
        let constants: Map<String, Value> =
            self.constants.iter().map(|(c, &e)| (c.clone(), name(e))).collect();
        let functions: Map<String, Value> = self
            .functions
            .iter()
            .map(|(f, table)| {
                let entries: Map<String, Value> = table
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let key = index_tuple(i, table.arity, size)
                            .iter()
                            .map(|&e| self.domain[e].as_str())
                            .collect::<Vec<_>>()
                            .join(",");
                        (key, name(v))
                    })
                    .collect();
                (f.clone(), Value::Object(entries))
            })
            .collect();
        let relations: Map<String, Value> = self
            .relations
            .iter()
            .map(|(p, rel)| {
                let tuples: Vec<Value> = rel
                    .tuples(size)
                    .map(|t| Value::Array(t.into_iter().map(name).collect()))
                    .collect();
                (p.clone(), Value::Array(tuples))
            })
            .collect();
        let mut out = json!({
            "domain": self.domain,
            "constants": constants,
            "functions": functions,
            "relations": relations,
        });
        if let Some((t, f)) = self.designated {
            out["designated_true"] = name(t);
            out["designated_false"] = name(f);
        }
        out
    }

    /// Tuples of a relation, by element name.
    pub fn relation_tuples(&self, predicate: &str) -> Result<BTreeSet<Vec<String>>, ModelError> {
        let size = self.size();
        Ok(self
            .relation(predicate)?
            .tuples(size)
            .map(|t| t.into_iter().map(|e| self.domain[e].clone()).collect())
            .collect())
    }
}
