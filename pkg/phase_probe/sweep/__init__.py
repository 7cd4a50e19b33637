"""스윕 실행/직렬화 패키지"""
