"""Binary locally recoverable codes with sequential recovery."""
