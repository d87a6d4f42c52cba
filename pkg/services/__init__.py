"""Services package: document codec, command execution, samplers and the acceptance suite."""
