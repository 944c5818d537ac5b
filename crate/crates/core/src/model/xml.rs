//! Minimal element tree over quick-xml events.

use std::collections::BTreeMap;

use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

#[derive(Debug, Clone, Default)]
pub(super) struct Element {
    /// Local name, namespace prefix stripped.
    pub name: String,
    pub attrs: BTreeMap<String, String>,
    pub children: Vec<Element>,
    pub text: String,
}

impl Element {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.get(key).map(String::as_str)
    }
}

fn open(e: &BytesStart<'_>) -> Result<Element, String> {
    let name = e.local_name().as_ref().to_string();
    let mut attrs = BTreeMap::new();
    for a in e.attributes() {
        let a = a.map_err(|err| err.to_string())?;
        let key = a.key.local_name().as_ref().to_string();
        // namespace declarations carry no model data
        if key == "xmlns" || a.key.prefix().is_some_and(|p| p.as_ref() == "xmlns") {
            continue;
        }
        let value = a.normalized_value(XmlVersion::Implicit1_0).map_err(|err| err.to_string())?.into_owned();
        attrs.insert(key, value);
    }
    Ok(Element {
        name,
        attrs,
        ..Element::default()
    })
}

pub(super) fn parse(text: &str) -> Result<Element, String> {
    let mut reader = Reader::from_str(text);
    let mut stack: Vec<Element> = Vec::new();
    let mut root = None;
    loop {
        let event = reader
            .read_event()
            .map_err(|e| format!("at byte {}: {e}", reader.buffer_position()))?;
        match event {
            Event::Start(e) => stack.push(open(&e)?),
            Event::Empty(e) => {
                let el = open(&e)?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(el),
                    None => root = Some(el),
                }
            }
            Event::End(_) => {
                let el = stack.pop().ok_or("unbalanced end tag")?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(el),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                if let Some(top) = stack.last_mut() {
                    let s = quick_xml::escape::unescape(t.as_ref()).map_err(|e| e.to_string())?;
                    top.text.push_str(&s);
                }
            }
            Event::GeneralRef(r) => {
                if let Some(top) = stack.last_mut() {
                    let raw = format!("&{};", r.as_ref());
                    let s = quick_xml::escape::unescape(&raw).map_err(|e| e.to_string())?;
                    top.text.push_str(&s);
                }
            }
            Event::CData(t) => {
                if let Some(top) = stack.last_mut() {
                    top.text.push_str(t.as_ref());
                }
            }
            Event::Eof => break,
            _ => {}
        }
        if root.is_some() && !stack.is_empty() {
            return Err("content after the root element".into());
        }
    }
    if !stack.is_empty() {
        return Err("unexpected end of document".into());
    }
    root.ok_or_else(|| "document has no root element".into())
}
