// CLI entry point; subcommands land with the pipeline modules.
int main() { return 0; }
