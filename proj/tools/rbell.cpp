// CLI lands with the pipeline layer.
int main() { return 0; }
