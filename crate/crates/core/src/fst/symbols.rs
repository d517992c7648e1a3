use std::collections::HashMap;

/// Integer id of a symbol in a [`SymbolTable`].
pub type Label = u32;

/// Reserved label for "no input" / "no output".
pub const EPSILON: Label = 0;
pub const EPSILON_SYMBOL: &str = "<epsilon>";

/// Bidirectional map between symbol strings and labels. Label 0 is always
/// `<epsilon>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: Vec<String>,
    ids: HashMap<String, Label>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        let mut ids = HashMap::new();
        ids.insert(EPSILON_SYMBOL.to_string(), EPSILON);
        SymbolTable {
            symbols: vec![EPSILON_SYMBOL.to_string()],
            ids,
        }
    }

    /// Character alphabet: one symbol per Unicode scalar value.
    pub fn from_chars<I: IntoIterator<Item = char>>(chars: I) -> Self {
        let mut table = Self::new();
        for c in chars {
            table.add_char(c);
        }
        table
    }

    /// Returns the existing label if the symbol is already present.
    pub fn add(&mut self, symbol: &str) -> Label {
        if let Some(&id) = self.ids.get(symbol) {
            return id;
        }
        let id = self.symbols.len() as Label;
        self.symbols.push(symbol.to_string());
        self.ids.insert(symbol.to_string(), id);
        id
    }

    pub fn add_char(&mut self, c: char) -> Label {
        let mut buf = [0u8; 4];
        self.add(c.encode_utf8(&mut buf))
    }

    pub fn find(&self, symbol: &str) -> Option<Label> {
        self.ids.get(symbol).copied()
    }

    pub fn find_char(&self, c: char) -> Option<Label> {
        let mut buf = [0u8; 4];
        self.find(c.encode_utf8(&mut buf))
    }

    pub fn symbol(&self, label: Label) -> Option<&str> {
        self.symbols.get(label as usize).map(String::as_str)
    }

    pub fn contains(&self, label: Label) -> bool {
        (label as usize) < self.symbols.len()
    }

    /// Number of symbols including epsilon.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.len() == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &str)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (i as Label, s.as_str()))
    }
}
