"""Growth series of weighted context-free grammars."""
