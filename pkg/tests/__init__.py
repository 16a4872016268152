# Test suite for Image Categorizer
