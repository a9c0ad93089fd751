# Test package for qlsmod
