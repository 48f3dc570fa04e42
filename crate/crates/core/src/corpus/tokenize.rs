/// Split text into lowercase alphabetic tokens of at least two characters.
///
/// Anything that is not a letter (punctuation, digits, whitespace) separates tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|tok| tok.chars().count() >= 2)
        .map(str::to_lowercase)
        .collect()
}
