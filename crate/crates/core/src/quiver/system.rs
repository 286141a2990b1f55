use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::geometry::{same_variety, Morphism, Variety};

use super::QuiverError;

#[derive(Clone)]
pub struct Arrow {
    name: String,
    src: usize,
    dst: usize,
    morphism: Morphism,
}

impl Arrow {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn dst(&self) -> usize {
        self.dst
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }
}

impl fmt::Debug for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{} -> {}]: {:?}", self.name, self.src, self.dst, self.morphism)
    }
}

/// A finite quiver of varieties and morphisms.
#[derive(Clone, Debug)]
pub struct System {
    vertices: Vec<Arc<Variety>>,
    arrows: Vec<Arrow>,
}

impl System {
    pub fn new(vertices: Vec<Arc<Variety>>) -> Result<Self, QuiverError> {
        let mut names = HashSet::new();
        for v in &vertices {
            if !names.insert(v.name().to_string()) {
                return Err(QuiverError::DuplicateName(v.name().to_string()));
            }
        }
        Ok(System {
            vertices,
            arrows: Vec::new(),
        })
    }

    /// Adds an arrow; the morphism must run between the named vertices.
    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        src: usize,
        dst: usize,
        morphism: Morphism,
    ) -> Result<usize, QuiverError> {
        let name = name.into();
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(QuiverError::DuplicateName(name));
        }
        let (Some(s), Some(d)) = (self.vertices.get(src), self.vertices.get(dst)) else {
            return Err(QuiverError::InvalidArrow {
                arrow: name,
                reason: format!("vertex index out of range ({src} -> {dst})"),
            });
        };
        if !same_variety(morphism.source(), s) || !same_variety(morphism.target(), d) {
            return Err(QuiverError::InvalidArrow {
                arrow: name,
                reason: format!(
                    "morphism runs {} -> {}, arrow runs {} -> {}",
                    morphism.source().name(),
                    morphism.target().name(),
                    s.name(),
                    d.name()
                ),
            });
        }
        let morphism = morphism.relabel(s.clone(), d.clone());
        self.arrows.push(Arrow {
            name,
            src,
            dst,
            morphism,
        });
        Ok(self.arrows.len() - 1)
    }

    pub fn vertices(&self) -> &[Arc<Variety>] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex(&self, i: usize) -> &Arc<Variety> {
        &self.vertices[i]
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name() == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn max_dimension(&self) -> usize {
        self.vertices.iter().map(|v| v.dimension()).max().unwrap_or(0)
    }

    /// The subsystem on the given vertices (in the given order) keeping the
    /// given arrows (in the given order); arrows must stay inside.
    pub fn restrict(&self, vertices: &[usize], arrows: &[usize]) -> System {
        let position = |v: usize| vertices.iter().position(|&w| w == v).expect("arrow leaves subsystem");
        System {
            vertices: vertices.iter().map(|&v| self.vertices[v].clone()).collect(),
            arrows: arrows
                .iter()
                .map(|&a| {
                    let arrow = &self.arrows[a];
                    Arrow {
                        src: position(arrow.src),
                        dst: position(arrow.dst),
                        ..arrow.clone()
                    }
                })
                .collect(),
        }
    }

    pub fn without_arrow(&self, arrow: usize) -> System {
        let vertices: Vec<usize> = (0..self.vertices.len()).collect();
        let arrows: Vec<usize> = (0..self.arrows.len()).filter(|&a| a != arrow).collect();
        self.restrict(&vertices, &arrows)
    }
}
